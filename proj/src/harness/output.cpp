#include "dwol/harness/output.hpp"

#include <filesystem>

#include "dwol/errors.hpp"
#include "dwol/version.hpp"

namespace dwol::harness {

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::string mode_name(const ModeIndex& n) {
    return "(" + std::to_string(n.nx) + "," + std::to_string(n.ny) + "," + std::to_string(n.nz) + ")";
}

}  // namespace

std::ofstream open_output(const std::string& dir, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    return os;
}

void write_header(std::ostream& os, const Json& resolved) {
    os << "# dwol " << version_string() << '\n';
    os << "# config " << resolved.dump() << '\n';
}

Json provenance(const Json& resolved) { return {{"version", version_string()}, {"config", resolved}}; }

Json coefficient_record(const Trajectory& traj, const HarmonicModel& h) {
    static const char* names[] = {"x", "y"};
    Json axes = Json::object();
    for (int a = 0; a < 2; ++a) {
        const AxisPath& ax = traj.axes[a];
        Json rec = {{"distance", ax.distance},
                    {"omega", ax.omega},
                    {"bernstein", to_vector(ax.q.coefficients())},
                    {"monomial", to_vector(ax.q.monomial_coefficients())}};
        if (ax.omega > 0) {
            const auto b = sta_coefficients(ax.omega, traj.t_f);
            rec["sta_b3_to_b9_per_unit_distance"] = std::vector<double>(b.begin(), b.end());
        }
        axes[names[a]] = rec;
    }
    return {{"variable", "s = t / t_f"},
            {"t_f", traj.t_f},
            {"t_f_over_T_x", traj.t_f / h.t_x},
            {"method", traj.provenance == Provenance::ESTA ? "eSTA" : "STA"},
            {"axes", axes}};
}

Json correction_report(const EstaCorrection& c, const HarmonicModel& h) {
    Json modes = Json::array();
    for (const ModeContribution& m : c.modes) {
        Json k = Json::array();
        for (Eigen::Index j = 0; j < m.k.size(); ++j) k.push_back({m.k[j].real(), m.k[j].imag()});
        modes.push_back({{"n", mode_name(m.n)}, {"G", {m.g.real(), m.g.imag()}}, {"K", k}});
    }
    return {{"cutoff", c.cutoff},
            {"epsilon_x", to_vector(c.epsilon.head(6))},
            {"epsilon_y", to_vector(c.epsilon.tail(6))},
            {"epsilon_over_l_x", to_vector(c.epsilon / h.l_x)},
            {"fidelity_estimate", c.fidelity_estimate},
            {"degenerate", c.degenerate},
            {"diagnostic", c.diagnostic},
            {"quadrature_panels", c.quadrature_panels},
            {"modes", modes}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_sweep_plot(const std::string& dir, const std::string& csv_name, const std::string& variable,
                      const std::string& unit) {
    std::ofstream os = open_output(dir, "sweep.gp");
    os << "set datafile separator ','\n"
       << "set key bottom right\n"
       << "set xlabel '" << variable << (unit.empty() ? "" : " [" + unit + "]") << "'\n"
       << "set ylabel 'fidelity'\n"
       << "set yrange [0:1.05]\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output 'sweep.png'\n"
       << "plot '" << csv_name << "' using 1:3 skip 3 with linespoints title 'STA', \\\n"
       << "     '" << csv_name << "' using 1:4 skip 3 with linespoints title 'eSTA'\n";
}

}  // namespace dwol::harness
