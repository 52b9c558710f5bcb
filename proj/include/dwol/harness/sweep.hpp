#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dwol/harness/config.hpp"

namespace dwol::harness {

// Keeps the last ground state so consecutive points with the same lattice and grid reuse it.
class ExperimentCache {
public:
    TransportExperiment& get(const ResolvedRun& run);

private:
    std::string key_;
    std::unique_ptr<TransportExperiment> experiment_;
};

struct MethodOutcome {
    Provenance method = Provenance::STA;
    Trajectory trajectory;
    std::optional<EstaCorrection> correction;
    TransportOutcome transport;
    // (m max|v_0| + 2/l) / (pi/dx) on the worst active axis. Above 1 an atom released from the trap
    // would carry momentum the comoving grid cannot represent, and the velocity kicks alias.
    double momentum_ratio = 0.0;
};

double momentum_ratio(const Trajectory& traj, const ResolvedRun& run);

// Designs the trajectory for one method, propagates the ground state along it and checks the fidelity bound.
MethodOutcome run_method(const ResolvedRun& run, Provenance method, ExperimentCache& cache,
                         const std::vector<double>& snapshot_fractions = {});

struct SweepRow {
    std::string sweep_value;
    double tf_over_tx = 0.0;
    std::optional<double> fidelity_sta, fidelity_esta;
    std::optional<long> steps_sta, steps_esta;
    double norm_drift_max = 0.0;
    double wall_time_s = 0.0;
    std::vector<std::string> diagnostics;
    bool failed = false;
};

// Runs every requested method for one configuration; failures are recorded, not thrown.
SweepRow run_point(const Json& doc, const std::vector<Provenance>& methods, ExperimentCache& cache,
                   const std::string& sweep_value = "");

const char* sweep_columns();
std::string format_row(const SweepRow& row);

struct SweepSummary {
    std::size_t rows = 0;
    std::size_t failed = 0;
};

// Points run on a bounded worker pool; rows are written in sweep order as soon as they are ready.
SweepSummary run_sweep(const Json& doc, const std::string& out_dir, int threads);

}  // namespace dwol::harness
