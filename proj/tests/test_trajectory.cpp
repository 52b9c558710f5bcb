#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "dwol/errors.hpp"
#include "dwol/trajectory.hpp"

using namespace dwol;

namespace {

HarmonicModel trap(double wx, double wy, double ax = 0.0) {
    HarmonicModel h;
    h.omega_x = wx;
    h.omega_y = wy;
    h.a_x = ax;
    h.t_x = 2 * kPi / wx;
    h.t_y = 2 * kPi / wy;
    return h;
}

}  // namespace

TEST_CASE("STA coefficients") {
    const auto b = sta_coefficients(1.0, 10.0);
    CHECK(b[2] == doctest::Approx(352.8).epsilon(1e-14));
    double sum = 0;
    for (double v : b) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    // The k-dependent parts cancel in the sum for any duration.
    for (double wt : {0.3, 2.0, 50.0}) {
        const auto c = sta_coefficients(1.0, wt);
        double s = 0;
        for (double v : c) s += v;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Bernstein representation reproduces the monomial coefficients") {
    const double w = 3.0, tf = 2.5, d = 7.0;
    const Eigen::VectorXd a = sta_polynomial(w, tf, d).monomial_coefficients();
    const auto b = sta_coefficients(w, tf);
    CHECK(std::abs(a[0]) < 1e-12 * d);
    CHECK(std::abs(a[1]) < 1e-12 * d);
    CHECK(std::abs(a[2]) < 1e-12 * d);
    for (int n = 3; n <= 9; ++n) CHECK(a[n] == doctest::Approx(d * b[n - 3]).epsilon(1e-11));
}

TEST_CASE("polynomial algebra matches pointwise arithmetic") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::VectorXd ca(6), cb(4);
    for (auto& v : ca) v = u(rng);
    for (auto& v : cb) v = u(rng);
    const Polynomial a = Polynomial::monomial(ca), b = Polynomial::monomial(cb);
    for (double s : {0.0, 0.13, 0.5, 0.77, 1.0}) {
        double pa = 0, pb = 0, dpa = 0;
        for (int i = 5; i >= 0; --i) pa = pa * s + ca[i];
        for (int i = 3; i >= 0; --i) pb = pb * s + cb[i];
        for (int i = 5; i >= 1; --i) dpa = dpa * s + i * ca[i];
        CHECK(a(s) == doctest::Approx(pa).epsilon(1e-13));
        CHECK((a + b)(s) == doctest::Approx(pa + pb).epsilon(1e-13));
        CHECK((a - b)(s) == doctest::Approx(pa - pb).epsilon(1e-13));
        CHECK((a * b)(s) == doctest::Approx(pa * pb).epsilon(1e-13));
        CHECK(a.derivative()(s) == doctest::Approx(dpa).epsilon(1e-13));
        CHECK(a.integral().derivative()(s) == doctest::Approx(pa).epsilon(1e-13));
        CHECK(a.elevated(11)(s) == doctest::Approx(pa).epsilon(1e-13));
    }
    CHECK(a.integral()(0.0) == 0.0);
}

TEST_CASE("endpoint conditions of the STA path") {
    const HarmonicModel h = trap(2.0, 3.0, -1.5);
    const Trajectory t = design_sta({Direction::x, 5.0, 4.0}, h);
    CHECK(t.position(0, 0.0) == 0.0);
    CHECK(t.position(0, t.t_f) == 5.0);
    for (int k = 1; k <= 2; ++k) {
        CHECK(t.derivative(0, k, 0.0) == 0.0);
        CHECK(t.derivative(0, k, t.t_f) == 0.0);
    }
    const Polynomial qc = classical_path(t, h, Axis::x);
    const double off = -h.a_x / (h.omega_x * h.omega_x);
    CHECK(qc(0.0) == doctest::Approx(off).epsilon(1e-15));
    CHECK(qc(1.0) == doctest::Approx(5.0 + off).epsilon(1e-15));
    for (int k = 1; k <= 4; ++k) {
        CHECK(qc.derivative(k)(0.0) == 0.0);
        CHECK(qc.derivative(k)(1.0) == 0.0);
    }
    // Midpoint of the minimal polynomial is d / 2 by symmetry.
    CHECK(minimal_polynomial(5.0)(0.5) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("auxiliary equation holds along the path") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 50; ++i) {
        const HarmonicModel h = trap(0.5 + 50 * u(rng), 0.5 + 50 * u(rng), 20 * (u(rng) - 0.5));
        const double d = 0.1 + 100 * u(rng);
        const Trajectory t = design_sta({Direction::diagonal, d, (0.5 + 5 * u(rng)) * h.t_x}, h);
        CHECK(auxiliary_residual(t, h, Axis::x, 101) <= 1e-10 * (d * h.omega_x * h.omega_x + std::abs(h.a_x)));
        CHECK(auxiliary_residual(t, h, Axis::y, 101) <= 1e-10 * d * h.omega_y * h.omega_y);
    }
}

TEST_CASE("scale equivariance in the distance") {
    const HarmonicModel h = trap(2.0, 2.0);
    const Trajectory a = design_sta({Direction::x, 1.0, 3.0}, h);
    const Trajectory b = design_sta({Direction::x, 7.5, 3.0}, h);
    for (double t : {0.2, 1.1, 2.9}) CHECK(b.position(0, t) == doctest::Approx(7.5 * a.position(0, t)).epsilon(1e-14));
}

TEST_CASE("long durations approach the minimal polynomial") {
    // q0 - d P = d P'' / (t_f omega)^2, so the gap falls as the inverse square of the duration.
    const HarmonicModel h = trap(1.0, 1.0);
    auto gap = [&](double tf) {
        const Trajectory t = design_sta({Direction::x, 1.0, tf}, h);
        const Polynomial p = minimal_polynomial(1.0);
        double g = 0;
        for (int i = 0; i <= 200; ++i) g = std::max(g, std::abs(t.axes[0].q(i / 200.0) - p(i / 200.0)));
        return g;
    };
    const double g1 = gap(50), g2 = gap(100);
    CHECK(g1 / g2 == doctest::Approx(4.0).epsilon(1e-10));
    double c = 0;
    const Polynomial p2 = minimal_polynomial(1.0).derivative(2);
    for (int i = 0; i <= 200; ++i) c = std::max(c, std::abs(p2(i / 200.0)));
    CHECK(g1 == doctest::Approx(c / 2500).epsilon(1e-10));
}

TEST_CASE("diagonal transport splits the distance") {
    const HarmonicModel h = trap(2.0, 3.0);
    const Trajectory t = design_sta({Direction::diagonal, 2.0, 5.0}, h);
    CHECK(t.position(0, 5.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(t.position(1, 5.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    // Each axis uses its own frequency.
    const Trajectory tx = design_sta({Direction::x, std::sqrt(2.0), 5.0}, h);
    CHECK(t.position(0, 1.3) == doctest::Approx(tx.position(0, 1.3)).epsilon(1e-14));
    const Trajectory y = design_sta({Direction::y, 2.0, 5.0}, h);
    CHECK(y.position(0, 2.0) == 0.0);
}

TEST_CASE("classical path checks its axis and frequency") {
    const HarmonicModel h = trap(2.0, 3.0);
    const Trajectory t = design_sta({Direction::x, 1.0, 5.0}, h);
    CHECK_THROWS_AS(classical_path(t, h, Axis::z), AxisMismatch);
    CHECK_THROWS_AS(classical_path(t, trap(2.5, 3.0), Axis::x), AxisMismatch);
    CHECK_THROWS_AS(design_sta({Direction::x, -1.0, 5.0}, h), InvalidParameters);
    CHECK_THROWS_AS(design_sta({Direction::x, 1.0, 0.0}, h), InvalidParameters);
}

TEST_CASE("trajectory table has the documented columns") {
    const HarmonicModel h = trap(2.0, 3.0);
    const Trajectory t = design_sta({Direction::x, 1.0, 5.0}, h);
    std::ostringstream os;
    write_trajectory_table(os, t, 11);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "s,t,q0x,q0y,v0x,v0y,a0x,a0y");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        std::istringstream ls(line);
        std::string field;
        std::vector<double> v;
        while (std::getline(ls, field, ',')) v.push_back(std::stod(field));
        REQUIRE(v.size() == 8);
        CHECK(v[1] == doctest::Approx(v[0] * 5.0));
        CHECK(v[2] == doctest::Approx(t.position(0, v[1])).epsilon(1e-14));
        CHECK(v[4] == doctest::Approx(t.velocity(0, v[1])).epsilon(1e-14));
    }
    CHECK(rows == 11);
}
