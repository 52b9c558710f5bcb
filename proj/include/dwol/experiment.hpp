#pragma once

#include <vector>

#include "dwol/grid.hpp"
#include "dwol/lattice.hpp"
#include "dwol/propagate.hpp"
#include "dwol/trajectory.hpp"

namespace dwol {

// Harmonic: Gaussian of the harmonic model at the single well. Broad: wide Gaussian at the grid center.
enum class IteSeed { harmonic, broad };

struct TransportSetup {
    LatticeParams lattice;
    PotentialModel model = PotentialModel::full;
    GridSpec grid;
    PropagationConfig propagation;
    IteConfig ite;
    IteSeed seed = IteSeed::harmonic;
};

struct TransportOutcome {
    double fidelity = 0.0;
    long accepted_steps = 0;
    long rejected_steps = 0;
    double norm_drift = 0.0;
    double max_boundary_ratio = 0.0;
    bool boundary_flag = false;
    std::vector<WaveField> snapshots;
};

// Planar grids (n_z = 1) use planar confinement.
Confinement confinement_for(const GridSpec& grid);

// Ground state computed once; every run propagates it along a trajectory in the comoving frame
// and measures the fidelity against the same state at t_f.
class TransportExperiment {
public:
    explicit TransportExperiment(const TransportSetup& setup);

    const HarmonicModel& harmonic() const { return h_; }
    const WaveField& ground_state() const { return ground_; }
    double ground_energy() const { return energy_; }
    long ite_iterations() const { return ite_iterations_; }

    TransportOutcome run(const Trajectory& traj, const std::vector<double>& snapshot_fractions = {});

private:
    TransportSetup setup_;
    HarmonicModel h_;
    SplitStepPropagator propagator_;
    WaveField ground_;
    double energy_ = 0.0;
    long ite_iterations_ = 0;
};

// Default planar window: three lattice periods per axis centered on the expansion point.
GridSpec default_planar_grid(const LatticeParams& p, int nx, int ny);

}  // namespace dwol
