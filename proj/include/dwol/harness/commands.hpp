#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dwol::harness {

struct CliOptions {
    std::string config;
    std::string out = "out";
    int threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> snapshot_fractions;
};

// Each command returns the process exit code: 0 success, 1 numerical failure.
// Configuration problems throw ConfigError (exit code 2).
int cmd_design(const CliOptions& opt, std::ostream& log);
int cmd_groundstate(const CliOptions& opt, std::ostream& log);
int cmd_transport(const CliOptions& opt, std::ostream& log);
int cmd_sweep(const CliOptions& opt, std::ostream& log);

// Selectors: hermite, gk, order, harmonic, ite, trajectory, all.
const std::vector<std::string>& verify_selectors();
int cmd_verify(const std::string& selector, const CliOptions& opt, std::ostream& log);

}  // namespace dwol::harness
