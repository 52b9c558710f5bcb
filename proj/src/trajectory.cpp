#include "dwol/trajectory.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "dwol/errors.hpp"

namespace dwol {

double Trajectory::derivative(int axis, int order, double t) const {
    const Polynomial d = axes.at(axis).q.derivative(order);
    return d(t / t_f) / std::pow(t_f, order);
}

Eigen::Vector3d Trajectory::position(double t) const { return {position(0, t), position(1, t), 0.0}; }
Eigen::Vector3d Trajectory::velocity(double t) const { return {velocity(0, t), velocity(1, t), 0.0}; }
Eigen::Vector3d Trajectory::acceleration(double t) const {
    return {acceleration(0, t), acceleration(1, t), 0.0};
}

std::array<double, 7> sta_coefficients(double omega, double t_f) {
    const double k = 1.0 / ((t_f * omega) * (t_f * omega));
    return {2520 * k, -12600 * k, 22680 * k + 126, -17640 * k - 420, 5040 * k + 540, -315, 70};
}

Polynomial minimal_polynomial(double distance) {
    // Bernstein coefficients (0, 0, 0, 0, 0, 1, 1, 1, 1, 1) times d.
    Eigen::VectorXd c = Eigen::VectorXd::Zero(10);
    c.tail(5).setConstant(distance);
    return Polynomial::bernstein(c);
}

Polynomial sta_polynomial(double omega, double t_f, double distance) {
    // q0 = q_c + q_c'' / omega^2 with q_c'' taken in s.
    const Polynomial p = minimal_polynomial(distance);
    const double k = 1.0 / ((t_f * omega) * (t_f * omega));
    return p + p.derivative(2) * k;
}

Trajectory design_sta(const TransportSpec& spec, const HarmonicModel& h) {
    if (!(spec.t_f > 0)) throw InvalidParameters("t_f must be positive");
    if (!(spec.distance >= 0)) throw InvalidParameters("transport distance must be non-negative");
    if (!(h.omega_x > 0) || !(h.omega_y > 0)) throw NonConfining("in-plane frequencies must be positive");
    double dx = 0, dy = 0;
    switch (spec.direction) {
        case Direction::x: dx = spec.distance; break;
        case Direction::y: dy = spec.distance; break;
        case Direction::diagonal: dx = dy = spec.distance / std::sqrt(2.0); break;
    }
    Trajectory traj;
    traj.t_f = spec.t_f;
    traj.axes[0] = {sta_polynomial(h.omega_x, spec.t_f, dx), dx, h.omega_x};
    traj.axes[1] = {sta_polynomial(h.omega_y, spec.t_f, dy), dy, h.omega_y};
    return traj;
}

Trajectory static_trajectory(double t_f, const HarmonicModel& h) {
    return design_sta({Direction::x, 0.0, t_f}, h);
}

Polynomial classical_path(const Trajectory& traj, const HarmonicModel& h, Axis axis) {
    if (axis == Axis::z) throw AxisMismatch("trajectories have no z component");
    const int a = static_cast<int>(axis);
    const double omega = a == 0 ? h.omega_x : h.omega_y;
    if (std::abs(traj.axes[a].omega - omega) > 1e-12 * omega)
        throw AxisMismatch("trajectory was designed for a different trap frequency on this axis");
    Polynomial qc = minimal_polynomial(traj.axes[a].distance);
    if (axis == Axis::x) qc += Polynomial::constant(-h.a_x / (omega * omega));
    return qc;
}

double auxiliary_residual(const Trajectory& traj, const HarmonicModel& h, Axis axis, int samples) {
    const Polynomial qc = classical_path(traj, h, axis);
    const int a = static_cast<int>(axis);
    const double omega = a == 0 ? h.omega_x : h.omega_y;
    const double force = a == 0 ? h.a_x : 0.0;
    const Polynomial qc2 = qc.derivative(2);
    const Polynomial& q0 = traj.axes[a].q;
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        const double s = samples > 1 ? static_cast<double>(i) / (samples - 1) : 0.0;
        const double r = qc2(s) / (traj.t_f * traj.t_f) + omega * omega * (qc(s) - q0(s)) + force;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

void write_trajectory_table(std::ostream& os, const Trajectory& traj, int rows) {
    os << "s,t,q0x,q0y,v0x,v0y,a0x,a0y\n";
    os << std::setprecision(17);
    for (int i = 0; i < rows; ++i) {
        const double s = rows > 1 ? static_cast<double>(i) / (rows - 1) : 0.0;
        const double t = s * traj.t_f;
        os << s << ',' << t << ',' << traj.position(0, t) << ',' << traj.position(1, t) << ','
           << traj.velocity(0, t) << ',' << traj.velocity(1, t) << ',' << traj.acceleration(0, t) << ','
           << traj.acceleration(1, t) << '\n';
    }
}

}  // namespace dwol
