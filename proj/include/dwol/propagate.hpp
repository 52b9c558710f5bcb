#pragma once

#include <map>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "dwol/fft.hpp"
#include "dwol/grid.hpp"
#include "dwol/lattice.hpp"
#include "dwol/trajectory.hpp"

namespace dwol {

enum class PotentialModel { full, harmonic };

// Potential sampled on the grid. Planar grids (n_z = 1) sample the z = origin plane.
Eigen::ArrayXd sample_potential(const GridSpec& grid, const LatticeParams& p, const HarmonicModel& h,
                                PotentialModel model);

enum class GuardAction { flag, abort };

struct PropagationConfig {
    double dt_initial = 0.0;  // 0 selects t_f / min_steps
    double max_rel_error = 1e-4;
    int min_steps = 20;
    long max_steps = 1000000;
    bool adaptive = true;
    double guard_threshold = 1e-6;
    GuardAction guard_action = GuardAction::flag;
};

struct PropagationResult {
    WaveField psi;
    long accepted_steps = 0;
    long rejected_steps = 0;
    double norm_drift = 0.0;
    double max_boundary_ratio = 0.0;
    bool boundary_flag = false;
};

// Comoving-frame split-operator propagator for a fixed static potential.
class SplitStepPropagator {
public:
    SplitStepPropagator(const GridSpec& grid, Eigen::ArrayXd potential, double mass = 1.0);

    const GridSpec& grid() const { return grid_; }
    const Eigen::ArrayXd& potential() const { return potential_; }
    const Fft& fft() const { return fft_; }

    // One second-order step from t to t + dt (in place).
    void step(WaveField& phi, const Trajectory& traj, double t, double dt);

    PropagationResult propagate(const WaveField& phi0, const Trajectory& traj, const PropagationConfig& cfg,
                                const std::vector<double>& snapshot_times = {},
                                std::vector<WaveField>* snapshots = nullptr);

private:
    const Eigen::ArrayXcd& half_potential_phase(double dt);

    GridSpec grid_;
    Eigen::ArrayXd potential_;
    double mass_;
    Fft fft_;
    std::array<Eigen::ArrayXd, 2> r_;  // in-plane coordinates
    std::array<Eigen::ArrayXd, 2> k_;  // in-plane wave numbers
    Eigen::ArrayXd k2_;
    std::map<double, Eigen::ArrayXcd> phase_cache_;
};

// Phi(r) = exp(-i m r.v0 / hbar) Psi(r + q0) at time t, and its inverse.
WaveField comoving_transform(const WaveField& lab, const Trajectory& traj, double t, double mass = 1.0);
WaveField lab_transform(const WaveField& comoving, const Trajectory& traj, double t, double mass = 1.0);

struct IteConfig {
    double tol_energy = 1e-10;
    double dtau = 0.0;  // 0 selects a default
    // dtau is divided by 4 per stage until it falls below dtau * final_ratio.
    double final_ratio = 1.0 / 64;
    long max_iterations = 200000;
};

struct IteResult {
    WaveField psi;
    double energy = 0.0;
    long iterations = 0;
    std::vector<double> energy_history;
};

double energy_expectation(const WaveField& w, const Eigen::ArrayXd& potential, const Fft& fft, double mass = 1.0);

// Imaginary-time split-operator relaxation. Without an initial state a broad Gaussian at the
// grid center is used.
IteResult ite_ground_state(const GridSpec& grid, const Eigen::ArrayXd& potential, const IteConfig& cfg,
                           const WaveField* initial = nullptr, double mass = 1.0);

// Gaussian ground state of the harmonic model (centered at x_e - a_x/omega_x^2), sampled on the grid.
WaveField harmonic_ground_state(const GridSpec& grid, const HarmonicModel& h, Frame frame = Frame::comoving);

// ITE seeded with the harmonic Gaussian, dtau scaled to the trap frequency.
IteResult lattice_ground_state(const GridSpec& grid, const LatticeParams& p, const HarmonicModel& h,
                               PotentialModel model, IteConfig cfg = {});

}  // namespace dwol
