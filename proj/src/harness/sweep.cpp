#include "dwol/harness/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dwol/errors.hpp"
#include "dwol/harness/output.hpp"

namespace dwol::harness {

namespace {

constexpr double kFidelityCeiling = 1 + 1e-9;

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string ground_state_key(const ResolvedRun& run) {
    const Json& in = run.resolved["internal"];
    Json k = {{"lattice", in["lattice"]},
              {"grid", in["grid"]},
              {"model", run.model == PotentialModel::full ? "full" : "harmonic"},
              {"ite", run.resolved["input"]["ite"]},
              {"propagation", run.resolved["input"]["propagation"]}};
    return k.dump();
}

}  // namespace

TransportExperiment& ExperimentCache::get(const ResolvedRun& run) {
    const std::string key = ground_state_key(run);
    if (!experiment_ || key != key_) {
        experiment_.reset();
        experiment_ = std::make_unique<TransportExperiment>(run.setup());
        key_ = key;
    }
    return *experiment_;
}

double momentum_ratio(const Trajectory& traj, const ResolvedRun& run) {
    const std::array<double, 2> l{run.harmonic.l_x, run.harmonic.l_y};
    double worst = 0;
    for (int a = 0; a < 2; ++a) {
        if (run.grid.n[a] == 1) continue;
        double vmax = 0;
        for (int i = 0; i <= 2000; ++i) vmax = std::max(vmax, std::abs(traj.velocity(a, traj.t_f * i / 2000)));
        const double k_max = kPi / run.grid.spacing(a);
        worst = std::max(worst, (run.lattice.mass * vmax + 2 / l[a]) / k_max);
    }
    return worst;
}

MethodOutcome run_method(const ResolvedRun& run, Provenance method, ExperimentCache& cache,
                         const std::vector<double>& snapshot_fractions) {
    MethodOutcome out;
    out.method = method;
    const Trajectory sta = design_sta(run.transport, run.harmonic);
    if (method == Provenance::ESTA) {
        const EstaOptions opt = run.esta_options();
        EstaCorrection c = esta_correction(sta, run.lattice, run.harmonic, opt);
        if (run.method.force_zero) {
            c.epsilon.setZero();
            c.diagnostic = "epsilon forced to zero";
        }
        out.trajectory = apply_correction(sta, c.epsilon, correction_basis(opt.basis));
        out.correction = std::move(c);
    } else {
        out.trajectory = sta;
    }
    out.momentum_ratio = momentum_ratio(out.trajectory, run);
    TransportExperiment& ex = cache.get(run);
    out.transport = ex.run(out.trajectory, snapshot_fractions);
    if (!(out.transport.fidelity <= kFidelityCeiling))
        throw NonFiniteAmplitude("fidelity " + number(out.transport.fidelity) + " exceeds 1 + 1e-9");
    return out;
}

SweepRow run_point(const Json& doc, const std::vector<Provenance>& methods, ExperimentCache& cache,
                   const std::string& sweep_value) {
    SweepRow row;
    row.sweep_value = sweep_value;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const ResolvedRun run = resolve(doc);
        row.tf_over_tx = run.transport.t_f / run.harmonic.t_x;
        for (const std::string& w : run.warnings) row.diagnostics.push_back("validity: " + w);
        for (Provenance m : methods) {
            const char* tag = m == Provenance::ESTA ? "esta" : "sta";
            try {
                const MethodOutcome o = run_method(run, m, cache);
                (m == Provenance::ESTA ? row.fidelity_esta : row.fidelity_sta) = o.transport.fidelity;
                (m == Provenance::ESTA ? row.steps_esta : row.steps_sta) = o.transport.accepted_steps;
                row.norm_drift_max = std::max(row.norm_drift_max, o.transport.norm_drift);
                if (o.transport.boundary_flag) row.diagnostics.push_back(std::string("boundary_contamination_") + tag);
                if (o.momentum_ratio > 1)
                    row.diagnostics.push_back(std::string("momentum_bandwidth_") + tag + " " + number(o.momentum_ratio));
                if (o.correction && !o.correction->diagnostic.empty())
                    row.diagnostics.push_back("esta: " + o.correction->diagnostic);
            } catch (const Error& e) {
                row.failed = true;
                row.diagnostics.push_back(std::string("error_") + tag + ": " + e.what());
            }
        }
    } catch (const std::exception& e) {
        row.failed = true;
        row.diagnostics.push_back(std::string("error: ") + e.what());
    }
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

const char* sweep_columns() {
    return "sweep_value,t_f_over_T_x,fidelity_sta,fidelity_esta,steps_sta,steps_esta,norm_drift_max,wall_time_s,"
           "diagnostics";
}

std::string format_row(const SweepRow& r) {
    auto opt = [](const auto& v) { return v ? number(static_cast<double>(*v)) : std::string(); };
    std::string diag;
    for (const std::string& d : r.diagnostics) diag += (diag.empty() ? "" : "; ") + d;
    std::ostringstream os;
    os << csv_field(r.sweep_value) << ',' << number(r.tf_over_tx) << ',' << opt(r.fidelity_sta) << ','
       << opt(r.fidelity_esta) << ',' << opt(r.steps_sta) << ',' << opt(r.steps_esta) << ','
       << number(r.norm_drift_max) << ',' << number(r.wall_time_s) << ',' << csv_field(diag);
    return os.str();
}

SweepSummary run_sweep(const Json& doc, const std::string& out_dir, int threads) {
    const std::optional<SweepSpec> spec = sweep_spec(doc);
    if (!spec) throw ConfigError("sweep: the config has no sweep block");
    // Validate the base document and every point before any work starts.
    const ResolvedRun base = resolve(doc);
    std::vector<Json> points;
    for (const std::string& v : spec->values) {
        Json p = with_value(doc, spec->variable, v);
        p.erase("sweep");
        resolve(p);
        points.push_back(std::move(p));
    }

    const std::string unit = split_quantity(spec->values.front()).unit;
    std::ofstream csv = open_output(out_dir, "sweep.csv");
    write_header(csv, base.resolved);
    csv << sweep_columns() << '\n' << std::flush;
    write_sweep_plot(out_dir, "sweep.csv", spec->variable, unit);

    const std::size_t n = points.size();
    std::vector<std::optional<SweepRow>> done(n);
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        ExperimentCache cache;
        for (std::size_t i = next++; i < n; i = next++) {
            SweepRow row = run_point(points[i], spec->methods, cache, number(split_quantity(spec->values[i]).number));
            {
                std::lock_guard lock(mu);
                done[i] = std::move(row);
            }
            ready.notify_one();
        }
    };
    const int pool = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    std::vector<std::jthread> workers;
    for (int t = 0; t < pool; ++t) workers.emplace_back(worker);

    SweepSummary summary;
    for (std::size_t i = 0; i < n; ++i) {
        SweepRow row;
        {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return done[i].has_value(); });
            row = std::move(*done[i]);
            done[i].reset();
        }
        csv << format_row(row) << '\n' << std::flush;
        ++summary.rows;
        if (row.failed) ++summary.failed;
    }
    return summary;
}

}  // namespace dwol::harness
