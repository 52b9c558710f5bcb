#include "dwol/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "dwol/errors.hpp"

namespace dwol {

double GridSpec::cell_volume() const {
    double v = 1;
    for (int a = 0; a < 3; ++a)
        if (n[a] > 1) v *= spacing(a);
    return v;
}

int GridSpec::active_axes() const {
    int k = 0;
    for (int a = 0; a < 3; ++a) k += n[a] > 1;
    return k;
}

Eigen::ArrayXd GridSpec::axis_points(int axis) const {
    if (n[axis] == 1) return Eigen::ArrayXd::Constant(1, origin[axis]);
    return origin[axis] + spacing(axis) * Eigen::ArrayXd::LinSpaced(n[axis], 0, n[axis] - 1);
}

Eigen::ArrayXd GridSpec::axis_wavenumbers(int axis) const {
    Eigen::ArrayXd k = Eigen::ArrayXd::Zero(n[axis]);
    if (n[axis] == 1) return k;
    const double dk = 2 * std::numbers::pi / extent[axis];
    for (int i = 0; i < n[axis]; ++i) k[i] = dk * (i < (n[axis] + 1) / 2 ? i : i - n[axis]);
    return k;
}

namespace {

Eigen::ArrayXd expand(const GridSpec& g, int axis, const Eigen::ArrayXd& line) {
    Eigen::ArrayXd out(g.size());
    Eigen::Index idx = 0;
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) out[idx++] = line[axis == 0 ? i : axis == 1 ? j : k];
    return out;
}

}  // namespace

Eigen::ArrayXd GridSpec::coordinate(int axis) const { return expand(*this, axis, axis_points(axis)); }
Eigen::ArrayXd GridSpec::wavenumber(int axis) const { return expand(*this, axis, axis_wavenumbers(axis)); }

GridSpec centered_grid(const std::array<int, 3>& n, const std::array<double, 3>& extent,
                       const Eigen::Vector3d& center) {
    GridSpec g;
    g.n = n;
    g.extent = extent;
    for (int a = 0; a < 3; ++a) {
        if (n[a] < 1 || !(extent[a] > 0)) throw InvalidParameters("grid point counts and extents must be positive");
        g.origin[a] = n[a] == 1 ? center[a] : center[a] - g.spacing(a) * (n[a] / 2);
    }
    return g;
}

bool transform_friendly(int n) {
    if (n < 1) return false;
    for (int p : {2, 3, 5, 7})
        while (n % p == 0) n /= p;
    return n == 1;
}

void WaveField::normalize() {
    const double n2 = norm_squared();
    if (!(n2 > 0) || !std::isfinite(n2)) throw NonFiniteAmplitude("cannot normalize a zero or non-finite field");
    psi /= std::sqrt(n2);
}

namespace {

void check_compatible(const WaveField& a, const WaveField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("wave fields live on different grids");
    if (a.frame != b.frame) throw FrameMismatch("wave fields are in different frames");
}

}  // namespace

std::complex<double> overlap(const WaveField& a, const WaveField& b) {
    check_compatible(a, b);
    return (a.psi.conjugate() * b.psi).sum() * a.grid.cell_volume();
}

double fidelity(const WaveField& a, const WaveField& b) { return std::norm(overlap(a, b)); }

double l2_distance(const WaveField& a, const WaveField& b) {
    check_compatible(a, b);
    return std::sqrt((a.psi - b.psi).abs2().sum() * a.grid.cell_volume());
}

double boundary_ratio(const WaveField& w) {
    const auto& g = w.grid;
    const double peak = w.psi.abs().maxCoeff();
    if (!(peak > 0)) return 0;
    double edge = 0;
    Eigen::Index idx = 0;
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i, ++idx) {
                const bool on_face = (g.n[0] > 1 && (i == 0 || i == g.n[0] - 1)) ||
                                     (g.n[1] > 1 && (j == 0 || j == g.n[1] - 1)) ||
                                     (g.n[2] > 1 && (k == 0 || k == g.n[2] - 1));
                if (on_face) edge = std::max(edge, std::abs(w.psi[idx]));
            }
    return edge / peak;
}

namespace {

constexpr char kMagic[8] = {'D', 'W', 'O', 'L', 'W', 'F', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    os.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    char bytes[sizeof(T)];
    if (!is.read(bytes, sizeof(T))) throw Error("truncated wave-field file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    return v;
}

}  // namespace

void write_wavefield(const std::string& path, const WaveField& w) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, kVersion);
    for (int a = 0; a < 3; ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(w.grid.n[a]));
    for (int a = 0; a < 3; ++a) put<double>(os, w.grid.spacing(a));
    for (int a = 0; a < 3; ++a) put<double>(os, w.grid.origin[a]);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(w.frame));
    for (Eigen::Index i = 0; i < w.psi.size(); ++i) {
        put<double>(os, w.psi[i].real());
        put<double>(os, w.psi[i].imag());
    }
    if (!os) throw Error("failed writing " + path);
}

WaveField read_wavefield(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw Error(path + " is not a wave-field dump");
    if (get<std::uint32_t>(is) != kVersion) throw Error("unsupported wave-field version in " + path);
    GridSpec g;
    for (int a = 0; a < 3; ++a) g.n[a] = static_cast<int>(get<std::uint32_t>(is));
    for (int a = 0; a < 3; ++a) g.extent[a] = get<double>(is) * g.n[a];
    for (int a = 0; a < 3; ++a) g.origin[a] = get<double>(is);
    WaveField w(g, static_cast<Frame>(get<std::uint8_t>(is)));
    for (Eigen::Index i = 0; i < w.psi.size(); ++i) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        w.psi[i] = {re, im};
    }
    return w;
}

}  // namespace dwol
