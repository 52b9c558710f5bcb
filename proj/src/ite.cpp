#include <algorithm>
#include <cmath>

#include "dwol/errors.hpp"
#include "dwol/esta.hpp"
#include "dwol/propagate.hpp"

namespace dwol {

double energy_expectation(const WaveField& w, const Eigen::ArrayXd& potential, const Fft& fft, double mass) {
    const GridSpec& g = w.grid;
    Eigen::ArrayXcd spec = w.psi;
    fft.forward(spec);
    const Eigen::ArrayXd k2 = g.wavenumber(0).square() + g.wavenumber(1).square() + g.wavenumber(2).square();
    const double dv = g.cell_volume();
    const double kinetic = (k2 * spec.abs2()).sum() * kHbar * kHbar / (2 * mass) / static_cast<double>(g.size()) * dv;
    const double pot = (potential * w.psi.abs2()).sum() * dv;
    return (kinetic + pot) / w.norm_squared();
}

IteResult ite_ground_state(const GridSpec& grid, const Eigen::ArrayXd& potential, const IteConfig& cfg,
                           const WaveField* initial, double mass) {
    if (potential.size() != grid.size()) throw GridMismatch("potential does not match the grid");
    const Fft fft(grid);
    IteResult res;
    if (initial) {
        if (!(initial->grid == grid)) throw GridMismatch("initial state does not match the grid");
        res.psi = *initial;
    } else {
        res.psi = WaveField(grid, Frame::comoving);
        Eigen::ArrayXd arg = Eigen::ArrayXd::Zero(grid.size());
        for (int a = 0; a < 3; ++a) {
            if (grid.n[a] == 1) continue;
            const double c = grid.origin[a] + grid.extent[a] / 2, w = grid.extent[a] / 8;
            arg += (grid.coordinate(a) - c).square() / (2 * w * w);
        }
        res.psi.psi = (-arg).exp().cast<std::complex<double>>();
    }
    res.psi.normalize();

    const Eigen::ArrayXd k2 = grid.wavenumber(0).square() + grid.wavenumber(1).square() + grid.wavenumber(2).square();
    const Eigen::ArrayXd shifted = potential - potential.minCoeff();
    double dtau = cfg.dtau > 0 ? cfg.dtau : 0.01;
    const double dtau_end = dtau * cfg.final_ratio;

    double e = energy_expectation(res.psi, potential, fft, mass);
    res.energy_history.push_back(e);
    while (true) {
        const Eigen::ArrayXd half = (-shifted * dtau / (2 * kHbar)).exp();
        const Eigen::ArrayXd kin = (-k2 * kHbar * dtau / (2 * mass)).exp();
        while (true) {
            const Eigen::ArrayXcd previous = res.psi.psi;
            res.psi.psi *= half;
            fft.forward(res.psi.psi);
            res.psi.psi *= kin;
            fft.backward(res.psi.psi);
            res.psi.psi *= half;
            res.psi.normalize();
            const double e_new = energy_expectation(res.psi, potential, fft, mass);
            if (++res.iterations > cfg.max_iterations)
                throw NoConvergence("imaginary-time evolution did not converge within the iteration cap");
            // A rise means the splitting bias at this dtau dominates the remaining decay.
            if (e_new > e + 1e-12 * std::abs(e)) {
                res.psi.psi = previous;
                break;
            }
            res.energy_history.push_back(e_new);
            const double change = std::abs(e_new - e) / (std::max(std::abs(e_new), 1e-300) * dtau);
            e = e_new;
            if (change <= cfg.tol_energy) break;
        }
        if (dtau <= dtau_end * (1 + 1e-12)) break;
        dtau = std::max(dtau / 4, dtau_end);
    }
    res.energy = e;
    return res;
}

WaveField harmonic_ground_state(const GridSpec& grid, const HarmonicModel& h, Frame frame) {
    WaveField w(grid, frame);
    const Eigen::Vector3d c(h.x_e - h.a_x / (h.omega_x * h.omega_x), 0, 0);
    const std::array<double, 3> l{h.l_x, h.l_y, h.l_z};
    Eigen::ArrayXd amp = Eigen::ArrayXd::Ones(grid.size());
    for (int a = 0; a < 3; ++a) {
        if (grid.n[a] == 1) continue;
        const Eigen::ArrayXd line = grid.axis_points(a);
        Eigen::ArrayXd vals(line.size());
        for (Eigen::Index i = 0; i < line.size(); ++i) vals[i] = oscillator_mode(0, l[a], line[i] - c[a]);
        Eigen::ArrayXd expanded(grid.size());
        Eigen::Index idx = 0;
        for (int k = 0; k < grid.n[2]; ++k)
            for (int j = 0; j < grid.n[1]; ++j)
                for (int i = 0; i < grid.n[0]; ++i) expanded[idx++] = vals[a == 0 ? i : a == 1 ? j : k];
        amp *= expanded;
    }
    w.psi = amp.cast<std::complex<double>>();
    w.normalize();
    return w;
}

IteResult lattice_ground_state(const GridSpec& grid, const LatticeParams& p, const HarmonicModel& h,
                               PotentialModel model, IteConfig cfg) {
    if (!(cfg.dtau > 0)) cfg.dtau = 0.5 / std::max(h.omega_x, h.omega_y);
    const WaveField seed = harmonic_ground_state(grid, h);
    return ite_ground_state(grid, sample_potential(grid, p, h, model), cfg, &seed, p.mass);
}

}  // namespace dwol
