#pragma once

#include <array>
#include <iosfwd>

#include <Eigen/Core>

#include "dwol/lattice.hpp"
#include "dwol/polynomial.hpp"

namespace dwol {

enum class Direction { x, y, diagonal };

struct TransportSpec {
    Direction direction = Direction::x;
    double distance = 0.0;
    double t_f = 1.0;
};

enum class Provenance { STA, ESTA };

// One in-plane axis of the moving-lattice path; q is a polynomial in s = t / t_f.
struct AxisPath {
    Polynomial q;
    double distance = 0.0;
    double omega = 0.0;
};

struct Trajectory {
    std::array<AxisPath, 2> axes;
    double t_f = 1.0;
    Provenance provenance = Provenance::STA;
    Eigen::VectorXd epsilon;  // 12 knot corrections (x then y) for eSTA paths

    double derivative(int axis, int order, double t) const;
    double position(int axis, double t) const { return derivative(axis, 0, t); }
    double velocity(int axis, double t) const { return derivative(axis, 1, t); }
    double acceleration(int axis, double t) const { return derivative(axis, 2, t); }
    Eigen::Vector3d position(double t) const;
    Eigen::Vector3d velocity(double t) const;
    Eigen::Vector3d acceleration(double t) const;
};

// b_3 .. b_9 of the ninth-degree STA polynomial.
std::array<double, 7> sta_coefficients(double omega, double t_f);

// d * (126 s^5 - 420 s^6 + 540 s^7 - 315 s^8 + 70 s^9)
Polynomial minimal_polynomial(double distance);

Polynomial sta_polynomial(double omega, double t_f, double distance);

Trajectory design_sta(const TransportSpec& spec, const HarmonicModel& h);

// Trap at rest for a duration t_f (both axes identically zero).
Trajectory static_trajectory(double t_f, const HarmonicModel& h);

// Classical path q_c(s) of the forced oscillator, including the -a_x/omega_x^2 offset on x.
Polynomial classical_path(const Trajectory& traj, const HarmonicModel& h, Axis axis);

// max over samples of |q_c'' + omega^2 (q_c - q_0) + a| on the given axis.
double auxiliary_residual(const Trajectory& traj, const HarmonicModel& h, Axis axis, int samples);

// Columns: s, t, q0x, q0y, v0x, v0y, a0x, a0y.
void write_trajectory_table(std::ostream& os, const Trajectory& traj, int rows);

}  // namespace dwol
