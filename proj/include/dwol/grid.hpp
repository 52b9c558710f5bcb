#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace dwol {

enum class Frame : std::uint8_t { lab = 0, comoving = 1 };

// Regular grid; origin is the coordinate of the first point on every axis.
// Axes with a single point are collapsed (coordinate = origin, zero wave number).
struct GridSpec {
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    Eigen::Vector3d origin = Eigen::Vector3d::Zero();

    Eigen::Index size() const { return static_cast<Eigen::Index>(n[0]) * n[1] * n[2]; }
    double spacing(int axis) const { return extent[axis] / n[axis]; }
    double cell_volume() const;
    int active_axes() const;
    Eigen::ArrayXd axis_points(int axis) const;
    Eigen::ArrayXd axis_wavenumbers(int axis) const;
    // Per-point coordinate / wave number of one axis, x fastest.
    Eigen::ArrayXd coordinate(int axis) const;
    Eigen::ArrayXd wavenumber(int axis) const;

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.n == b.n && a.extent == b.extent && a.origin == b.origin;
    }
};

// Grid with the given point counts and extents whose middle point sits at center.
GridSpec centered_grid(const std::array<int, 3>& n, const std::array<double, 3>& extent,
                       const Eigen::Vector3d& center);

// True when n is a product of the primes 2, 3, 5, 7.
bool transform_friendly(int n);

struct WaveField {
    GridSpec grid;
    Eigen::ArrayXcd psi;
    double time = 0.0;
    Frame frame = Frame::comoving;

    WaveField() = default;
    WaveField(GridSpec g, Frame f) : grid(g), psi(Eigen::ArrayXcd::Zero(g.size())), frame(f) {}

    double norm_squared() const { return psi.abs2().sum() * grid.cell_volume(); }
    void normalize();
};

std::complex<double> overlap(const WaveField& a, const WaveField& b);
double fidelity(const WaveField& a, const WaveField& b);
double l2_distance(const WaveField& a, const WaveField& b);

// max |psi| over the outer faces of the active axes divided by max |psi|.
double boundary_ratio(const WaveField& w);

void write_wavefield(const std::string& path, const WaveField& w);
WaveField read_wavefield(const std::string& path);

}  // namespace dwol
