#include "dwol/experiment.hpp"

#include "dwol/errors.hpp"

namespace dwol {

Confinement confinement_for(const GridSpec& grid) {
    return grid.n[2] == 1 ? Confinement::Planar : Confinement::Full;
}

namespace {

HarmonicModel model_for(const TransportSetup& s) { return harmonic_approximation(s.lattice, confinement_for(s.grid)); }

}  // namespace

TransportExperiment::TransportExperiment(const TransportSetup& setup)
    : setup_(setup),
      h_(model_for(setup)),
      propagator_(setup.grid, sample_potential(setup.grid, setup.lattice, h_, setup.model), setup.lattice.mass) {
    IteConfig cfg = setup.ite;
    if (!(cfg.dtau > 0)) cfg.dtau = 0.5 / std::max(h_.omega_x, h_.omega_y);
    const WaveField seed = harmonic_ground_state(setup.grid, h_);
    IteResult r = ite_ground_state(setup.grid, propagator_.potential(), cfg,
                                   setup.seed == IteSeed::harmonic ? &seed : nullptr, setup.lattice.mass);
    ground_ = std::move(r.psi);
    energy_ = r.energy;
    ite_iterations_ = r.iterations;
}

TransportOutcome TransportExperiment::run(const Trajectory& traj, const std::vector<double>& snapshot_fractions) {
    std::vector<double> times;
    for (double f : snapshot_fractions) times.push_back(f * traj.t_f);
    TransportOutcome out;
    PropagationResult r = propagator_.propagate(ground_, traj, setup_.propagation, times, &out.snapshots);
    out.fidelity = fidelity(ground_, r.psi);
    out.accepted_steps = r.accepted_steps;
    out.rejected_steps = r.rejected_steps;
    out.norm_drift = r.norm_drift;
    out.max_boundary_ratio = r.max_boundary_ratio;
    out.boundary_flag = r.boundary_flag;
    return out;
}

GridSpec default_planar_grid(const LatticeParams& p, int nx, int ny) {
    const double period = 2 * kPi / p.k_L;
    return centered_grid({nx, ny, 1}, {3 * period, 3 * period, 1.0}, Eigen::Vector3d(-kPi / (2 * p.k_L), 0, 0));
}

}  // namespace dwol
