// Acceptance run: one PASS/FAIL line per criterion with the measured value and the pinned limit.
// Exit code 0 when every criterion passes or failed only as listed with --expect-fail.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "dwol/harness/sweep.hpp"
#include "dwol/verify.hpp"

using namespace dwol;
using namespace dwol::harness;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Verdict {
    int id = 0;
    bool pass = false;
    std::string text;
};

std::vector<Verdict> verdicts;
double worst_norm_drift = 0.0;
long drift_runs = 0;

void report(int id, bool pass, const std::string& text) {
    verdicts.push_back({id, pass, text});
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", text.c_str());
    std::fflush(stdout);
}

// Failed checks of a suite as "name = value (limit)".
std::string failures(const verify::SuiteReport& r) {
    std::string s;
    for (const verify::Check& c : r.checks)
        if (!c.pass) s += "; " + r.suite + " failed " + c.name + " = " + fmt(c.value) + " (limit " + fmt(c.limit) + ")";
    return s;
}

void progress(const std::string& s) {
    std::fprintf(stderr, "  .. %s\n", s.c_str());
    std::fflush(stderr);
}

Json planar_doc(double depth_er, int n) {
    Json doc;
    doc["lattice"] = {{"depth", fmt(depth_er) + " E_R"}};
    doc["transport"] = {{"direction", "x"}, {"distance", "158 l_x"}, {"t_f", "4 T_x"}};
    doc["grid"] = {{"n", {n, n, 1}}};
    return doc;
}

// STA (and optionally eSTA) fidelities on a t_f grid; rows go to a CSV next to the binary.
struct Scan {
    std::vector<double> tf;
    std::vector<double> sta, esta;
    std::vector<double> momentum;  // MethodOutcome::momentum_ratio of the STA path
};

Scan scan(double depth_er, int n, const std::vector<double>& tf, bool with_esta, const std::string& csv) {
    Scan s;
    s.tf = tf;
    ExperimentCache cache;
    std::ofstream os(csv);
    os << "t_f_over_T_x,fidelity_sta,fidelity_esta,steps_sta,steps_esta,norm_drift_max,momentum_ratio,wall_time_s\n";
    for (double t : tf) {
        const auto t0 = Clock::now();
        Json doc = planar_doc(depth_er, n);
        doc["transport"]["t_f"] = fmt(t) + " T_x";
        const ResolvedRun run = resolve(doc);
        const MethodOutcome a = run_method(run, Provenance::STA, cache);
        s.sta.push_back(a.transport.fidelity);
        s.momentum.push_back(a.momentum_ratio);
        double drift = a.transport.norm_drift;
        std::string esta_f, esta_steps;
        if (with_esta) {
            const MethodOutcome b = run_method(run, Provenance::ESTA, cache);
            s.esta.push_back(b.transport.fidelity);
            drift = std::max(drift, b.transport.norm_drift);
            esta_f = fmt(b.transport.fidelity);
            esta_steps = std::to_string(b.transport.accepted_steps);
            ++drift_runs;
        }
        ++drift_runs;
        worst_norm_drift = std::max(worst_norm_drift, drift);
        os << fmt(t) << ',' << fmt(a.transport.fidelity) << ',' << esta_f << ',' << a.transport.accepted_steps << ','
           << esta_steps << ',' << drift << ',' << fmt(a.momentum_ratio) << ',' << fmt(seconds_since(t0)) << '\n'
           << std::flush;
        progress(fmt(depth_er) + " E_R, t_f = " + fmt(t) + " T_x: STA " + fmt(a.transport.fidelity) +
                 (with_esta ? ", eSTA " + esta_f : "") + " (" + fmt(seconds_since(t0)) + " s)");
    }
    return s;
}

// Largest t_f at which the fidelity, followed from long to short times, first drops below 0.5.
std::optional<double> onset(const Scan& s) {
    for (std::size_t i = s.tf.size() - 1; i-- > 0;) {
        if (s.sta[i + 1] >= 0.5 && s.sta[i] < 0.5) {
            const double w = (0.5 - s.sta[i]) / (s.sta[i + 1] - s.sta[i]);
            return s.tf[i] + w * (s.tf[i + 1] - s.tf[i]);
        }
        if (s.sta[i + 1] < 0.5) return std::nullopt;
    }
    return std::nullopt;
}

void criterion1() {
    const verify::SuiteReport r = verify::harmonic_transport_suite({2, 4, 8});
    double worst = 0, slowest = 0;
    for (const verify::Check& c : r.checks) {
        double& slot = c.name.rfind("infidelity", 0) == 0 ? worst : slowest;
        slot = std::max(slot, c.value);
    }
    report(1, r.pass(),
           "harmonic-model STA transport, 512 points, d = 158 l_x, t_f in {2,4,8} T_x: worst infidelity " + fmt(worst) +
               " (limit 1e-4), slowest case " + fmt(slowest) + " s (limit 10 s)" + failures(r));
}

void criterion2(std::uint64_t seed) {
    const verify::SuiteReport a = verify::hermite_suite(seed);
    const verify::SuiteReport b = verify::auxiliary_suite(seed, 20);
    double worst_g = 0, worst_k = 0, worst_h = 0;
    for (const verify::Check& c : b.checks) {
        if (c.name.rfind("G_n", 0) == 0) worst_g = std::max(worst_g, c.value);
        if (c.name.rfind("K_n", 0) == 0) worst_k = std::max(worst_k, c.value);
    }
    for (const verify::Check& c : a.checks) worst_h = std::max(worst_h, c.value / c.limit);
    const double total = a.seconds + b.seconds;
    report(2, a.pass() && b.pass() && total <= 1200,
           "closed-form G_n/K_n (n_x+n_y+n_z <= 2, 20 draws) vs space-time quadrature: worst error/allowed G " +
               fmt(worst_g) + ", K " + fmt(worst_k) + " (limit 1, allowed = 1e-5 relative); Hermite primitives worst " +
               fmt(worst_h) + " of the 1e-8 limit; " + fmt(total) + " s (limit 1200 s)" + failures(a) + failures(b));
}

void criterion3() {
    const verify::SuiteReport r = verify::order_suite();
    report(3, r.pass(),
           "dyadic dt sweep, 2D harmonic transport: observed order " + fmt(r.checks.front().value) +
               " (limits [1.8, 2.2]), " + fmt(r.seconds) + " s (limit 120 s)" + failures(r));
}

void criterion4() {
    const verify::SuiteReport a = verify::ite_suite(128);
    const verify::SuiteReport b = verify::bimodal_suite();
    const double total = a.seconds + b.seconds;
    report(4, a.pass() && b.pass() && total <= 600,
           "ITE on 128^3 harmonic + linear model: relative energy error " + fmt(a.checks.front().value) +
               " (limit 1e-6); 300 E_R lattice density maxima along x per unit cell " + fmt(b.checks.front().value) +
               " (expected 2, " + b.checks.front().detail + "); " + fmt(total) + " s (limit 600 s)" + failures(a) +
               failures(b));
}

void criterion6(const std::string& dir) {
    const auto t0 = Clock::now();
    std::vector<double> tf;
    for (int i = 0; i < 8; ++i) tf.push_back(3.0 + 2.0 * i / 7);
    const Scan s50 = scan(50, 256, tf, false, dir + "/criterion6_50ER.csv");
    const Scan s150 = scan(150, 256, tf, false, dir + "/criterion6_150ER.csv");
    const double dt = seconds_since(t0);
    const std::optional<double> o50 = onset(s50), o150 = onset(s150);
    const bool collapse = s50.sta.front() < 0.5 && s150.sta.front() < 0.5;
    const bool ordered = o50 && o150 && *o150 < *o50;
    const bool near50 = o50 && std::abs(*o50 - 3.8) <= 0.5;
    const bool near150 = o150 && std::abs(*o150 - 3.3) <= 0.5;
    auto show = [](const std::optional<double>& o) { return o ? fmt(*o) : std::string("none"); };
    // Points where a released atom would alias on the grid; the onset is trustworthy only above them.
    auto aliased = [](const Scan& s) {
        double last = 0;
        for (std::size_t i = 0; i < s.tf.size(); ++i)
            if (s.momentum[i] > 1) last = s.tf[i];
        return last > 0 ? "momentum bandwidth exceeded up to t_f = " + fmt(last) + " T_x" : std::string("none aliased");
    };
    report(6, collapse && ordered && near50 && near150 && dt <= 2700,
           "256^2 planar STA, d = 158 l_x, 8 t_f in [3, 5] T_x: F(3 T_x) = " + fmt(s50.sta.front()) + " (50 E_R), " +
               fmt(s150.sta.front()) + " (150 E_R) (limit < 0.5) " + (collapse ? "ok" : "FAILED") +
               "; onset (F first below 0.5 coming from long t_f) " + show(o50) + " T_x at 50 E_R, " + show(o150) +
               " T_x at 150 E_R (" + aliased(s50) + " / " + aliased(s150) + "); ordering " + (ordered ? "ok" : "FAILED") + "; location vs 3.8 / 3.3 T_x within 0.5: " +
               (near50 ? "ok" : "FAILED") + " / " + (near150 ? "ok" : "FAILED") + "; " + fmt(dt) + " s (limit 2700 s)");
}

void criterion7(const std::string& dir) {
    const auto t0 = Clock::now();
    const Scan s = scan(1500, 256, {3.0, 3.25}, true, dir + "/criterion7_1500ER.csv");
    const double dt = seconds_since(t0);
    const bool ordering = s.esta[0] >= s.sta[0] && s.esta[1] >= s.sta[1];
    const bool regime = s.sta[1] < 0.9;
    const bool margin = s.esta[1] >= 0.85 && s.sta[1] <= s.esta[1] - 0.02;
    report(7, ordering && regime && margin && dt <= 1800,
           "256^2 planar, 1500 E_R, d = 158 l_x: t_f = 3 T_x STA " + fmt(s.sta[0]) + " eSTA " + fmt(s.esta[0]) +
               "; t_f = 3.25 T_x STA " + fmt(s.sta[1]) + " eSTA " + fmt(s.esta[1]) + "; eSTA >= STA at both " +
               (ordering ? "ok" : "FAILED") + "; at 3.25 T_x STA < 0.9 " + (regime ? "ok" : "FAILED") +
               ", eSTA >= 0.85 and STA <= eSTA - 0.02 " + (margin ? "ok" : "FAILED") + "; " + fmt(dt) +
               " s (limit 1800 s)");
}

void criterion5() {
    report(5, drift_runs > 0 && worst_norm_drift <= 1e-10,
           "largest cumulative norm drift over " + std::to_string(drift_runs) + " full lattice transport runs " +
               fmt(worst_norm_drift) + " (limit 1e-10)");
}

void criterion8(std::uint64_t seed) {
    const verify::SuiteReport r = verify::trajectory_suite(seed, 1000);
    std::string values;
    for (const verify::Check& c : r.checks) values += "; " + c.name + " " + fmt(c.value) + " (limit " + fmt(c.limit) + ")";
    report(8, r.pass() && r.seconds <= 5, "1000 random (omega, t_f, d)" + values + "; " + fmt(r.seconds) + " s (limit 5 s)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only, expected;
    std::uint64_t seed = 1;
    std::string dir = "acceptance_out";
    app.add_option("--only", only, "run only these criteria (5 needs 6 or 7)")->delimiter(',');
    app.add_option("--expect-fail", expected, "criteria whose failure is a documented deviation")->delimiter(',');
    app.add_option("--seed", seed, "seed for the randomized checks")->capture_default_str();
    app.add_option("--out", dir, "directory for the fidelity tables")->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    std::filesystem::create_directories(dir);

    auto wanted = [&](int id) { return only.empty() || std::count(only.begin(), only.end(), id); };
    const std::vector<std::pair<int, std::function<void()>>> order{
        {1, criterion1}, {2, [&] { criterion2(seed); }}, {3, criterion3}, {4, criterion4}, {8, [&] { criterion8(seed); }},
        {6, [&] { criterion6(dir); }}, {7, [&] { criterion7(dir); }}, {5, criterion5}};
    for (const auto& [id, fn] : order) {
        if (!wanted(id)) continue;
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, false, std::string("error: ") + e.what());
        }
    }

    std::sort(verdicts.begin(), verdicts.end(), [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
    std::printf("\nsummary\n");
    int unexpected = 0;
    for (const Verdict& v : verdicts) {
        const bool excused = !v.pass && std::count(expected.begin(), expected.end(), v.id);
        if (!v.pass && !excused) ++unexpected;
        std::printf("criterion %d: %s%s\n", v.id, v.pass ? "PASS" : "FAIL", excused ? " (documented deviation)" : "");
    }
    return unexpected == 0 ? 0 : 1;
}
