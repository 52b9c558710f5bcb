#include "dwol/lattice.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <limits>
#include <mutex>

#include "dwol/diagnostics.hpp"
#include "dwol/errors.hpp"

namespace dwol {

namespace {

std::mutex g_sink_mutex;
DiagnosticSink g_sink;

}  // namespace

void set_diagnostic_sink(DiagnosticSink sink) {
    std::lock_guard lock(g_sink_mutex);
    g_sink = std::move(sink);
}

void emit_diagnostic(const std::string& message) {
    std::lock_guard lock(g_sink_mutex);
    if (g_sink)
        g_sink(message);
    else
        std::cerr << "warning: " << message << '\n';
}

void validate(const LatticeParams& p) {
    auto fail = [](const std::string& what) { throw InvalidParameters(what); };
    if (!(p.u_d0 >= 0)) fail("u_d0 must be non-negative");
    if (!(p.beta >= 0 && p.beta <= kPi / 2 + 1e-12)) fail("beta must lie in [0, pi/2]");
    if (!(p.theta >= -kPi - 1e-12 && p.theta <= kPi + 1e-12)) fail("theta must lie in [-pi, pi]");
    if (!std::isfinite(p.phi)) fail("phi must be finite");
    if (!(p.xi_z >= 0)) fail("xi_z must be non-negative");
    for (double v : {p.k_L, p.k_z, p.w0x, p.w0y, p.z_Rx, p.z_Ry, p.mass})
        if (!(v > 0) || !std::isfinite(v)) fail("wave numbers, waists, Rayleigh lengths and mass must be positive");
}

double well_depth(const LatticeParams& p) {
    const double cb = std::cos(p.beta / 2), sb = std::sin(p.beta / 2);
    const double c2 = std::pow(std::cos(p.theta / 2), 2);
    return p.u_d0 * 4 * (cb * cb + 2 * c2 * c2 * sb * sb);
}

double omega_x_sq(const LatticeParams& p) {
    const double cb = std::cos(p.beta / 2), sb = std::sin(p.beta / 2);
    return 4 * p.u_d0 * p.k_L * p.k_L / p.mass *
           ((std::cos(p.theta) + std::cos(2 * p.theta)) * sb * sb + cb * cb);
}

double omega_y_sq(const LatticeParams& p) {
    const double sb = std::sin(p.beta / 2);
    return 4 * p.u_d0 * p.k_L * p.k_L / p.mass * (1 + std::cos(p.theta) * sb * sb);
}

double omega_z_sq(const LatticeParams& p) {
    const double cb = std::cos(p.beta / 2);
    return 2 * p.u_d0 * p.k_z * p.k_z / p.mass *
           (p.xi_z + std::sqrt(p.xi_z) * cb * (std::cos(p.phi / 2) + std::sin(p.phi / 2)));
}

double linear_acceleration(const LatticeParams& p) {
    const double sb = std::sin(p.beta / 2);
    return -4 * p.u_d0 * p.k_L / p.mass * sb * sb * (1 + std::cos(p.theta)) * std::sin(p.theta);
}

HarmonicModel harmonic_approximation(const LatticeParams& p, Confinement c) {
    validate(p);
    const double wx2 = omega_x_sq(p), wy2 = omega_y_sq(p), wz2 = omega_z_sq(p);
    if (!(wx2 > 0) || !(wy2 > 0))
        throw NonConfining("in-plane squared frequency is not positive (omega_x^2 = " + std::to_string(wx2) +
                           ", omega_y^2 = " + std::to_string(wy2) + ")");
    if (c == Confinement::Full && !(wz2 > 0))
        throw NonConfining("omega_z^2 = " + std::to_string(wz2) + " is not positive");

    HarmonicModel h;
    h.mass = p.mass;
    h.v_d0 = well_depth(p);
    h.omega_x = std::sqrt(wx2);
    h.omega_y = std::sqrt(wy2);
    h.omega_z = wz2 > 0 ? std::sqrt(wz2) : 0.0;
    h.a_x = linear_acceleration(p);
    auto zero_point = [&](double w) {
        return w > 0 ? std::sqrt(kHbar / (2 * p.mass * w)) : std::numeric_limits<double>::infinity();
    };
    h.l_x = zero_point(h.omega_x);
    h.l_y = zero_point(h.omega_y);
    h.l_z = zero_point(h.omega_z);
    h.t_x = 2 * kPi / h.omega_x;
    h.t_y = 2 * kPi / h.omega_y;
    h.e_r = kHbar * kHbar * p.k_L * p.k_L / (2 * p.mass);
    h.x_e = -kPi / (2 * p.k_L);
    return h;
}

namespace {

bool has_local_minimum(const std::vector<double>& u, double slope, double ds) {
    const std::size_t n = u.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double f0 = u[i - 1] + slope * (static_cast<double>(i) - 1) * ds;
        const double f1 = u[i] + slope * static_cast<double>(i) * ds;
        const double f2 = u[i + 1] + slope * (static_cast<double>(i) + 1) * ds;
        if (f1 < f0 && f1 < f2) return true;
    }
    return false;
}

}  // namespace

double critical_acceleration(const LatticeParams& p, Axis direction) {
    validate(p);
    constexpr int kPoints = 8001;
    const double half = 2 * kPi / std::min(p.k_L, p.k_z);
    const double ds = 2 * half / (kPoints - 1);
    std::vector<double> u(kPoints);
    Eigen::Vector3d origin(-kPi / (2 * p.k_L), 0, 0);
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[static_cast<int>(direction)] = 1;
    double max_slope = 0;
    for (int i = 0; i < kPoints; ++i) {
        u[i] = evaluate_potential(Eigen::Vector3d(origin + (-half + i * ds) * e), p);
        if (i > 0) max_slope = std::max(max_slope, std::abs(u[i] - u[i - 1]) / ds);
    }
    if (!has_local_minimum(u, 0.0, ds)) return 0.0;

    double result = std::numeric_limits<double>::infinity();
    for (double sign : {1.0, -1.0}) {
        double lo = 0, hi = 2 * max_slope + 1e-300;
        for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (has_local_minimum(u, sign * mid, ds))
                lo = mid;
            else
                hi = mid;
        }
        result = std::min(result, lo / p.mass);
    }
    return result;
}

std::vector<std::string> validity_warnings(const LatticeParams& p, const HarmonicModel& h) {
    std::vector<std::string> out;
    // Treat "much smaller" as at least a factor of ten.
    if (p.xi_z > 0.1 * p.w0x / h.l_x || p.xi_z > 0.1 * p.w0y / h.l_y)
        out.push_back("xi_z is not small compared with w0/l; the cross term is no longer a small disturbance");
    if (p.w0x * p.k_L < 10 || p.w0y * p.k_L < 10)
        out.push_back("beam waists are comparable to the lattice period; paraxial envelope assumption is doubtful");
    if (std::isfinite(h.l_z) && (p.z_Rx < 10 * h.l_z || p.z_Ry < 10 * h.l_z))
        out.push_back("Rayleigh lengths are not large compared with l_z; frozen-waist integrals are inaccurate");
    return out;
}

}  // namespace dwol
