#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dwol {

inline constexpr double kHbar = 1.0;
inline constexpr double kPi = std::numbers::pi;

enum class Axis { x = 0, y = 1, z = 2 };

// Lattice definition in internal units (hbar = 1; see README for the unit system).
struct LatticeParams {
    double u_d0 = 0.0;
    double beta = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double xi_z = 0.0;
    double k_L = 1.0;
    double k_z = 1.0;
    double w0x = 1e4;
    double w0y = 1e4;
    double z_Rx = 1e8;
    double z_Ry = 1e8;
    double mass = 1.0;
};

struct HarmonicModel {
    double v_d0 = 0.0;
    double omega_x = 0.0, omega_y = 0.0, omega_z = 0.0;
    double a_x = 0.0;
    double l_x = 0.0, l_y = 0.0, l_z = 0.0;
    double t_x = 0.0, t_y = 0.0;
    double e_r = 0.0;
    double x_e = 0.0;  // expansion point -pi/(2 k_L)
    double mass = 1.0;
};

enum class Confinement { Full, Planar };

template <typename T>
struct PotentialTerms {
    T parallel;
    T perpendicular;
    T z;
    T cross;
};

void validate(const LatticeParams& p);

template <typename T>
PotentialTerms<T> evaluate_potential_terms(const T& x, const T& y, const T& z, const LatticeParams& p) {
    using std::cos;
    using std::exp;
    using std::sin;
    using std::sqrt;
    const double cb = std::cos(p.beta / 2), sb = std::sin(p.beta / 2);
    const double kL = p.k_L;
    const T wx = p.w0x * sqrt(1.0 + (z / p.z_Rx) * (z / p.z_Rx));
    const T wy = p.w0y * sqrt(1.0 + (z / p.z_Ry) * (z / p.z_Ry));
    const T amp = (p.w0x * p.w0y) / (wx * wy);
    const T g = x * x / (wx * wx) + y * y / (wy * wy);
    const T cy = cos(kL * y);
    const T d = cy - sin(kL * x - p.theta);
    const T cz = cos(p.k_z * z);
    return {
        cb * cb * (cos(2 * kL * y) - cos(2 * kL * x) + 2.0),
        2 * sb * sb * d * d,
        p.xi_z * amp * cz * cz * exp(-2.0 * g),
        2 * std::sqrt(p.xi_z) * cb * sqrt(amp) * exp(-1.0 * g) * cz *
            (std::cos(p.phi / 2) * cy - std::sin(p.phi / 2) * sin(kL * x)),
    };
}

template <typename T>
T evaluate_potential(const T& x, const T& y, const T& z, const LatticeParams& p) {
    const auto t = evaluate_potential_terms(x, y, z, p);
    return -p.u_d0 * (t.parallel + t.perpendicular + t.z + t.cross);
}

inline double evaluate_potential(const Eigen::Vector3d& r, const LatticeParams& p) {
    return evaluate_potential(r.x(), r.y(), r.z(), p);
}

inline PotentialTerms<double> evaluate_potential_terms(const Eigen::Vector3d& r, const LatticeParams& p) {
    return evaluate_potential_terms(r.x(), r.y(), r.z(), p);
}

// Throws NonConfining if a required squared frequency is not positive.
// Planar confinement only requires the in-plane frequencies.
HarmonicModel harmonic_approximation(const LatticeParams& p, Confinement c = Confinement::Full);

// Squared frequencies and linear coefficient of the expansion about (x_e, 0, 0).
double omega_x_sq(const LatticeParams& p);
double omega_y_sq(const LatticeParams& p);
double omega_z_sq(const LatticeParams& p);
double linear_acceleration(const LatticeParams& p);
double well_depth(const LatticeParams& p);

// V_D(r) = -V_d0 + m a_x (x - x_e) + m/2 [omega_x^2 (x - x_e)^2 + omega_y^2 y^2 + omega_z^2 z^2]
template <typename T>
T harmonic_potential(const T& x, const T& y, const T& z, const HarmonicModel& h) {
    const T dx = x - h.x_e;
    return -h.v_d0 + h.mass * h.a_x * dx +
           0.5 * h.mass *
               (h.omega_x * h.omega_x * dx * dx + h.omega_y * h.omega_y * y * y +
                h.omega_z * h.omega_z * z * z);
}

// Largest |a| for which U_D + m a r_dir keeps a local minimum along a line through the
// expansion point. Both tilt signs are scanned; the smaller value is returned.
double critical_acceleration(const LatticeParams& p, Axis direction);

std::vector<std::string> validity_warnings(const LatticeParams& p, const HarmonicModel& h);

}  // namespace dwol
