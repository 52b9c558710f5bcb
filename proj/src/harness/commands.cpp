#include "dwol/harness/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>

#include "dwol/errors.hpp"
#include "dwol/harness/output.hpp"
#include "dwol/harness/sweep.hpp"
#include "dwol/verify.hpp"
#include "dwol/version.hpp"

namespace dwol::harness {

namespace {

Json load_with_overrides(const CliOptions& opt) {
    if (opt.config.empty()) throw ConfigError("--config is required for this command");
    Json doc = load_config(opt.config);
    if (opt.seed) doc["seed"] = *opt.seed;
    if (opt.snapshot_fractions) doc["output"]["snapshot_fractions"] = *opt.snapshot_fractions;
    return doc;
}

std::string binary_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

std::string fixed(double v, const char* fmt = "%.10g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

void write_json(const std::string& dir, const std::string& name, const Json& j) {
    std::ofstream os = open_output(dir, name);
    os << j.dump(2) << '\n';
}

void write_trajectory(const std::string& dir, const ResolvedRun& run, const Trajectory& traj) {
    std::ofstream os = open_output(dir, "trajectory.csv");
    write_header(os, run.resolved);
    write_trajectory_table(os, traj, run.output.trajectory_rows);
}

Json suite_json(const verify::SuiteReport& r) {
    Json checks = Json::array();
    for (const verify::Check& c : r.checks)
        checks.push_back(
            {{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}, {"detail", c.detail}});
    return {{"suite", r.suite}, {"pass", r.pass()}, {"seconds", r.seconds}, {"checks", checks}};
}

}  // namespace

int cmd_design(const CliOptions& opt, std::ostream& log) {
    const ResolvedRun run = resolve(load_with_overrides(opt));
    const Trajectory sta = design_sta(run.transport, run.harmonic);
    Trajectory traj = sta;
    if (run.method.kind == Provenance::ESTA) {
        const EstaOptions eo = run.esta_options();
        EstaCorrection c = esta_correction(sta, run.lattice, run.harmonic, eo);
        if (run.method.force_zero) {
            c.epsilon.setZero();
            c.diagnostic = "epsilon forced to zero";
        }
        traj = apply_correction(sta, c.epsilon, correction_basis(eo.basis));
        Json rep = correction_report(c, run.harmonic);
        rep["provenance"] = provenance(run.resolved);
        write_json(opt.out, "correction.json", rep);
        log << "eSTA correction: |epsilon| = " << fixed(c.epsilon.norm() / run.harmonic.l_x) << " l_x, estimated fidelity "
            << fixed(c.fidelity_estimate) << (c.diagnostic.empty() ? "" : " (" + c.diagnostic + ")") << '\n';
    }
    write_trajectory(opt.out, run, traj);
    Json coeff = coefficient_record(traj, run.harmonic);
    coeff["provenance"] = provenance(run.resolved);
    write_json(opt.out, "coefficients.json", coeff);
    log << "trajectory written to " << opt.out << "/trajectory.csv\n";
    return 0;
}

int cmd_groundstate(const CliOptions& opt, std::ostream& log) {
    const ResolvedRun run = resolve(load_with_overrides(opt));
    const TransportExperiment ex(run.setup());
    const HarmonicModel& h = ex.harmonic();
    const WaveField& g = ex.ground_state();
    write_wavefield(binary_path(opt.out, "ground_state.bin"), g);

    std::ofstream os = open_output(opt.out, "density.csv");
    write_header(os, run.resolved);
    os << "x,y,density\n";
    const int k = g.grid.n[2] / 2;
    const Eigen::ArrayXd x = g.grid.axis_points(0), y = g.grid.axis_points(1);
    os.precision(12);
    for (int j = 0; j < g.grid.n[1]; ++j)
        for (int i = 0; i < g.grid.n[0]; ++i)
            os << x[i] << ',' << y[j] << ','
               << std::norm(g.psi[(static_cast<Eigen::Index>(k) * g.grid.n[1] + j) * g.grid.n[0] + i]) << '\n';

    const double harmonic_estimate = 0.5 * (h.omega_x + h.omega_y + (run.planar() ? 0.0 : h.omega_z)) -
                                     h.mass * h.a_x * h.a_x / (2 * h.omega_x * h.omega_x) - h.v_d0;
    write_json(opt.out, "ground_state.json",
               {{"energy", ex.ground_energy()},
                {"energy_over_E_R", ex.ground_energy() / h.e_r},
                {"harmonic_estimate", harmonic_estimate},
                {"ite_iterations", ex.ite_iterations()},
                {"frame", "comoving"},
                {"provenance", provenance(run.resolved)}});
    log << "ground state energy " << fixed(ex.ground_energy() / h.e_r) << " E_R after " << ex.ite_iterations()
        << " iterations\n";
    return 0;
}

int cmd_transport(const CliOptions& opt, std::ostream& log) {
    const ResolvedRun run = resolve(load_with_overrides(opt));
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentCache cache;
    const MethodOutcome o = run_method(run, run.method.kind, cache, run.output.snapshot_fractions);
    const bool esta = run.method.kind == Provenance::ESTA;
    write_trajectory(opt.out, run, o.trajectory);
    if (o.correction) {
        Json rep = correction_report(*o.correction, run.harmonic);
        rep["provenance"] = provenance(run.resolved);
        write_json(opt.out, "correction.json", rep);
    }
    if (!o.transport.snapshots.empty()) {
        Json files = Json::array();
        for (std::size_t i = 0; i < o.transport.snapshots.size(); ++i) {
            const double f = run.output.snapshot_fractions[i];
            const std::string name = "snapshot_" + fixed(f, "%.4f") + ".bin";
            write_wavefield(binary_path(opt.out, name), o.transport.snapshots[i]);
            files.push_back({{"file", name}, {"fraction", f}, {"t", f * run.transport.t_f}});
        }
        write_json(opt.out, "snapshots.json",
                   {{"frame", "comoving"}, {"snapshots", files}, {"provenance", provenance(run.resolved)}});
    }

    SweepRow row;
    row.tf_over_tx = run.transport.t_f / run.harmonic.t_x;
    (esta ? row.fidelity_esta : row.fidelity_sta) = o.transport.fidelity;
    (esta ? row.steps_esta : row.steps_sta) = o.transport.accepted_steps;
    row.norm_drift_max = o.transport.norm_drift;
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const std::string& w : run.warnings) row.diagnostics.push_back("validity: " + w);
    if (o.transport.boundary_flag)
        row.diagnostics.push_back(std::string("boundary_contamination_") + (esta ? "esta" : "sta"));
    if (o.momentum_ratio > 1)
        row.diagnostics.push_back(std::string("momentum_bandwidth_") + (esta ? "esta " : "sta ") +
                                  fixed(o.momentum_ratio, "%.12g"));
    if (o.correction && !o.correction->diagnostic.empty()) row.diagnostics.push_back("esta: " + o.correction->diagnostic);
    std::ofstream os = open_output(opt.out, "transport.csv");
    write_header(os, run.resolved);
    os << sweep_columns() << '\n' << format_row(row) << '\n';

    log << (esta ? "eSTA" : "STA") << " fidelity " << fixed(o.transport.fidelity) << " at t_f = "
        << fixed(row.tf_over_tx) << " T_x (" << o.transport.accepted_steps << " steps, " << o.transport.rejected_steps
        << " rejected, norm drift " << fixed(o.transport.norm_drift, "%.2e") << ")\n";
    return 0;
}

int cmd_sweep(const CliOptions& opt, std::ostream& log) {
    const SweepSummary s = run_sweep(load_with_overrides(opt), opt.out, opt.threads);
    log << s.rows << " sweep rows written to " << opt.out << "/sweep.csv";
    if (s.failed) log << ", " << s.failed << " with errors (see diagnostics column)";
    log << '\n';
    return s.failed ? 1 : 0;
}

const std::vector<std::string>& verify_selectors() {
    static const std::vector<std::string> s{"hermite", "gk", "order", "harmonic", "ite", "trajectory", "all"};
    return s;
}

int cmd_verify(const std::string& selector, const CliOptions& opt, std::ostream& log) {
    const std::uint64_t seed = opt.seed.value_or(1);
    using Runner = std::function<std::vector<verify::SuiteReport>()>;
    const std::vector<std::pair<std::string, Runner>> suites{
        {"hermite", [&] { return std::vector{verify::hermite_suite(seed)}; }},
        {"gk", [&] { return std::vector{verify::auxiliary_suite(seed)}; }},
        {"order", [] { return std::vector{verify::order_suite()}; }},
        {"harmonic", [] { return std::vector{verify::harmonic_transport_suite()}; }},
        {"ite", [] { return std::vector{verify::ite_suite(), verify::bimodal_suite()}; }},
        {"trajectory", [&] { return std::vector{verify::trajectory_suite(seed)}; }},
    };
    bool known = selector == "all";
    for (const auto& [name, _] : suites) known = known || name == selector;
    if (!known) throw ConfigError("unknown verify selector '" + selector + "'");

    Json all = Json::array();
    bool pass = true;
    for (const auto& [name, runner] : suites) {
        if (selector != "all" && selector != name) continue;
        for (const verify::SuiteReport& r : runner()) {
            const Json j = suite_json(r);
            log << j.dump() << '\n' << std::flush;
            all.push_back(j);
            pass = pass && r.pass();
        }
    }
    write_json(opt.out, "verify.json", {{"selector", selector}, {"seed", seed}, {"version", version_string()}, {"pass", pass}, {"suites", all}});
    return pass ? 0 : 1;
}

}  // namespace dwol::harness
