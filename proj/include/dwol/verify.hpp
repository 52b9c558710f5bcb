#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dwol/esta.hpp"
#include "dwol/hermite.hpp"
#include "dwol/lattice.hpp"
#include "dwol/trajectory.hpp"

namespace dwol::verify {

// Gauss-Hermite rule for the weight exp(-x^2).
struct Rule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};
Rule gauss_hermite(int n);

// Defining integral of a Hermite kind by adaptive 1D quadrature, with the L1 norm of the integrand.
struct QuadValue {
    double value = 0.0;
    double l1 = 0.0;
};
QuadValue hermite_kind_quadrature(HermiteKind kind, const AxisFrame& f, const KindArgs& a);

struct OracleOptions {
    int space_nodes = 24;
    int time_nodes = 12;    // Gauss-Legendre nodes per panel
    double panel_phase = 3.0;  // phase budget per time panel in radians
    double fd_step = 2e-3;  // central-difference step in units of 1/k_L
    bool planar = false;
};

// G_n and K_n by tensor Gauss-Hermite quadrature in space around the mode centers, composite
// Gauss-Legendre in time, the full transport modes and finite-difference potential gradients.
// When l1 is given it receives the L1 norms of the discrete integrands in the same layout, which
// bound the roundoff of the quadrature sums.
std::vector<ModeContribution> brute_force_auxiliary(const std::vector<ModeIndex>& modes, const Trajectory& sta,
                                                    const LatticeParams& p, const HarmonicModel& h,
                                                    const CorrectionBasis& basis, const OracleOptions& opt = {},
                                                    std::vector<ModeContribution>* l1 = nullptr);

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    double seconds = 0.0;
    bool pass() const;
};

// 1D Hermite primitives: closed forms (both routes) against adaptive quadrature, relative 1e-8.
SuiteReport hermite_suite(std::uint64_t seed, int sets = 60);

// Closed-form G_n, K_n (n_x + n_y + n_z <= 2) against the space-time oracle, relative 1e-5.
SuiteReport auxiliary_suite(std::uint64_t seed, int draws = 20);

// Harmonic STA transport in 1D: fidelity >= 1 - 1e-4 and runtime <= 10 s per duration.
SuiteReport harmonic_transport_suite(const std::vector<double>& tf_over_tx = {2, 4, 8});

// Observed global order of the split-step scheme on a 2D harmonic transport problem.
SuiteReport order_suite();

// ITE energy of the harmonic + linear model on an n^3 grid, relative 1e-6.
SuiteReport ite_suite(int n = 128);

// Full lattice ground state at 300 E_R in the plane: two density maxima along x per unit cell.
SuiteReport bimodal_suite(int n = 256);

// Endpoint and auxiliary-equation contracts of random STA and eSTA-corrected paths.
SuiteReport trajectory_suite(std::uint64_t seed, int count = 1000);

// Lattice parameters of the double-well configuration used in the reproduction runs.
LatticeParams dwol_params(double u_d0_er, double xi_z = 0.0);

}  // namespace dwol::verify
