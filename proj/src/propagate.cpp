#include "dwol/propagate.hpp"

#include <algorithm>
#include <cmath>

#include "dwol/errors.hpp"

namespace dwol {

Eigen::ArrayXd sample_potential(const GridSpec& grid, const LatticeParams& p, const HarmonicModel& h,
                                PotentialModel model) {
    const Eigen::ArrayXd x = grid.coordinate(0), y = grid.coordinate(1), z = grid.coordinate(2);
    if (model == PotentialModel::harmonic) return harmonic_potential(x, y, z, h);
    return evaluate_potential(x, y, z, p);
}

SplitStepPropagator::SplitStepPropagator(const GridSpec& grid, Eigen::ArrayXd potential, double mass)
    : grid_(grid), potential_(std::move(potential)), mass_(mass), fft_(grid) {
    if (potential_.size() != grid.size()) throw GridMismatch("potential does not match the grid");
    for (int a = 0; a < 2; ++a) {
        r_[a] = grid.coordinate(a);
        k_[a] = grid.wavenumber(a);
    }
    const Eigen::ArrayXd kz = grid.wavenumber(2);
    k2_ = k_[0].square() + k_[1].square() + kz.square();
}

const Eigen::ArrayXcd& SplitStepPropagator::half_potential_phase(double dt) {
    auto it = phase_cache_.find(dt);
    if (it != phase_cache_.end()) return it->second;
    if (phase_cache_.size() >= 16) phase_cache_.clear();
    Eigen::ArrayXcd ph(potential_.size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, -potential_[i] * dt / (2 * kHbar));
    return phase_cache_.emplace(dt, std::move(ph)).first->second;
}

void SplitStepPropagator::step(WaveField& phi, const Trajectory& traj, double t, double dt) {
    if (phi.frame != Frame::comoving) throw FrameMismatch("split-operator steps act on comoving-frame fields");
    if (!(phi.grid == grid_)) throw GridMismatch("wave field does not match the propagator grid");
    const double dvx = traj.velocity(0, t + dt) - traj.velocity(0, t);
    const double dvy = traj.velocity(1, t + dt) - traj.velocity(1, t);
    const Eigen::ArrayXcd& half = half_potential_phase(dt);
    auto& psi = phi.psi;
    psi *= half;
    if (dvx != 0 || dvy != 0)
        for (Eigen::Index i = 0; i < psi.size(); ++i)
            psi[i] *= std::polar(1.0, -mass_ * (r_[0][i] * dvx + r_[1][i] * dvy) / kHbar);
    fft_.forward(psi);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double arg = -kHbar * k2_[i] * dt / (2 * mass_) - 0.5 * (k_[0][i] * dvx + k_[1][i] * dvy) * dt;
        psi[i] *= std::polar(1.0, arg);
    }
    fft_.backward(psi);
    psi *= half;
    phi.time = t + dt;
}

PropagationResult SplitStepPropagator::propagate(const WaveField& phi0, const Trajectory& traj,
                                                 const PropagationConfig& cfg,
                                                 const std::vector<double>& snapshot_times,
                                                 std::vector<WaveField>* snapshots) {
    if (phi0.frame != Frame::comoving) throw FrameMismatch("propagation expects a comoving-frame field");
    if (!(cfg.max_rel_error > 0) || cfg.min_steps < 1) throw InvalidParameters("invalid propagation settings");
    const double tf = traj.t_f;
    const double dt_max = tf / cfg.min_steps;
    const double dt_floor = tf / std::pow(2.0, 20);
    double dt = cfg.dt_initial > 0 ? std::min(cfg.dt_initial, cfg.adaptive ? dt_max : cfg.dt_initial) : dt_max;

    std::vector<double> stops;
    for (double s : snapshot_times)
        if (s > 0 && s < tf) stops.push_back(s);
    std::sort(stops.begin(), stops.end());
    stops.push_back(tf);

    PropagationResult res;
    WaveField phi = phi0;
    phi.time = 0;
    const double n0 = phi.norm_squared();
    double t = 0;
    std::size_t next_stop = 0;

    auto after_accept = [&]() {
        const double ratio = boundary_ratio(phi);
        res.max_boundary_ratio = std::max(res.max_boundary_ratio, ratio);
        if (ratio > cfg.guard_threshold) {
            if (cfg.guard_action == GuardAction::abort)
                throw BoundaryContamination("boundary amplitude ratio " + std::to_string(ratio) + " at t = " +
                                            std::to_string(t) + " exceeds the guard threshold");
            res.boundary_flag = true;
        }
        if (!std::isfinite(phi.psi.abs2().sum())) throw NonFiniteAmplitude("wave field became non-finite");
        if (res.accepted_steps > cfg.max_steps) throw StepUnderflow("step budget exhausted");
        while (next_stop < stops.size() && t >= stops[next_stop] * (1 - 1e-14)) {
            if (snapshots && next_stop + 1 < stops.size()) snapshots->push_back(phi);
            ++next_stop;
        }
    };

    while (next_stop < stops.size()) {
        const double target = stops[next_stop];
        const double h = std::min(dt, target - t);
        const bool truncated = h < dt;
        if (!cfg.adaptive) {
            step(phi, traj, t, h);
            t = (target - (t + h) <= 1e-14 * tf) ? target : t + h;
            ++res.accepted_steps;
            after_accept();
            continue;
        }
        WaveField coarse = phi;
        step(coarse, traj, t, h);
        WaveField fine = phi;
        step(fine, traj, t, h / 2);
        step(fine, traj, t + h / 2, h / 2);
        const double err = l2_distance(coarse, fine) / std::sqrt(n0);
        if (err <= cfg.max_rel_error) {
            phi = std::move(fine);
            t = (target - (t + h) <= 1e-14 * tf) ? target : t + h;
            ++res.accepted_steps;
            after_accept();
            if (!truncated && err < cfg.max_rel_error / 16) dt = std::min(2 * dt, dt_max);
        } else {
            ++res.rejected_steps;
            dt = h / 2;
            if (dt < dt_floor) throw StepUnderflow("adaptive step fell below t_f / 2^20");
        }
    }
    phi.time = tf;
    res.norm_drift = std::abs(phi.norm_squared() - n0);
    res.psi = std::move(phi);
    return res;
}

WaveField comoving_transform(const WaveField& lab, const Trajectory& traj, double t, double mass) {
    if (lab.frame != Frame::lab) throw FrameMismatch("comoving_transform expects a lab-frame field");
    const GridSpec& g = lab.grid;
    const Fft fft(g);
    const Eigen::Vector3d q0 = traj.position(t), v0 = traj.velocity(t);
    WaveField out = lab;
    const Eigen::ArrayXd kx = g.wavenumber(0), ky = g.wavenumber(1), x = g.coordinate(0), y = g.coordinate(1);
    fft.forward(out.psi);
    for (Eigen::Index i = 0; i < out.psi.size(); ++i) out.psi[i] *= std::polar(1.0, kx[i] * q0.x() + ky[i] * q0.y());
    fft.backward(out.psi);
    for (Eigen::Index i = 0; i < out.psi.size(); ++i)
        out.psi[i] *= std::polar(1.0, -mass * (x[i] * v0.x() + y[i] * v0.y()) / kHbar);
    out.frame = Frame::comoving;
    out.time = t;
    return out;
}

WaveField lab_transform(const WaveField& comoving, const Trajectory& traj, double t, double mass) {
    if (comoving.frame != Frame::comoving) throw FrameMismatch("lab_transform expects a comoving-frame field");
    const GridSpec& g = comoving.grid;
    const Fft fft(g);
    const Eigen::Vector3d q0 = traj.position(t), v0 = traj.velocity(t);
    WaveField out = comoving;
    const Eigen::ArrayXd kx = g.wavenumber(0), ky = g.wavenumber(1), x = g.coordinate(0), y = g.coordinate(1);
    for (Eigen::Index i = 0; i < out.psi.size(); ++i)
        out.psi[i] *= std::polar(1.0, mass * (x[i] * v0.x() + y[i] * v0.y()) / kHbar);
    fft.forward(out.psi);
    for (Eigen::Index i = 0; i < out.psi.size(); ++i)
        out.psi[i] *= std::polar(1.0, -(kx[i] * q0.x() + ky[i] * q0.y()));
    fft.backward(out.psi);
    out.frame = Frame::lab;
    out.time = t;
    return out;
}

}  // namespace dwol
