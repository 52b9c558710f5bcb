#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include <doctest.h>

#include "dwol/errors.hpp"
#include "dwol/experiment.hpp"
#include "dwol/propagate.hpp"
#include "dwol/trajectory.hpp"
#include "dwol/verify.hpp"

using namespace dwol;
using cd = std::complex<double>;

namespace {

HarmonicModel oscillator(double wx, double wy) {
    HarmonicModel h;
    h.omega_x = wx;
    h.omega_y = wy;
    h.omega_z = 1.0;
    h.l_x = std::sqrt(1 / (2 * wx));
    h.l_y = std::sqrt(1 / (2 * wy));
    h.l_z = std::sqrt(0.5);
    h.t_x = 2 * M_PI / wx;
    h.t_y = 2 * M_PI / wy;
    return h;
}

WaveField gaussian(const GridSpec& g, double x0, double y0, double wx, double wy, Frame f = Frame::comoving) {
    WaveField w(g, f);
    const Eigen::ArrayXd x = g.coordinate(0), y = g.coordinate(1);
    for (Eigen::Index i = 0; i < w.psi.size(); ++i) {
        double e = -0.5 * wx * (x[i] - x0) * (x[i] - x0);
        if (g.n[1] > 1) e -= 0.5 * wy * (y[i] - y0) * (y[i] - y0);
        w.psi[i] = std::exp(e);
    }
    w.normalize();
    return w;
}

PropagationConfig fixed_steps(double tf, long n) {
    PropagationConfig c;
    c.adaptive = false;
    c.dt_initial = tf / n;
    c.min_steps = 1;
    return c;
}

double mean_x(const WaveField& w) {
    const Eigen::ArrayXd x = w.grid.coordinate(0);
    return (x * w.psi.abs2()).sum() * w.grid.cell_volume() / w.norm_squared();
}

}  // namespace

TEST_CASE("grid helpers") {
    CHECK(transform_friendly(256));
    CHECK(transform_friendly(200));
    CHECK(transform_friendly(2 * 3 * 5 * 7));
    CHECK_FALSE(transform_friendly(11));
    CHECK_FALSE(transform_friendly(2 * 13));
    const GridSpec g = centered_grid({16, 10, 1}, {8.0, 5.0, 1.0}, Eigen::Vector3d(1.0, -2.0, 0.5));
    CHECK(g.active_axes() == 2);
    CHECK(g.axis_points(0)[8] == doctest::Approx(1.0));
    CHECK(g.axis_points(1)[5] == doctest::Approx(-2.0));
    CHECK(g.axis_points(2)[0] == doctest::Approx(0.5));
    CHECK(g.axis_wavenumbers(2)[0] == 0.0);
    CHECK(g.axis_wavenumbers(0)[1] == doctest::Approx(2 * M_PI / 8.0));
    CHECK(g.axis_wavenumbers(0)[15] == doctest::Approx(-2 * M_PI / 8.0));
    CHECK_THROWS_AS(centered_grid({0, 1, 1}, {1.0, 1.0, 1.0}, Eigen::Vector3d::Zero()), InvalidParameters);
}

TEST_CASE("plane wave acquires the exact kinetic phase") {
    const GridSpec g = centered_grid({64, 1, 1}, {20.0, 1.0, 1.0}, Eigen::Vector3d::Zero());
    SplitStepPropagator prop(g, Eigen::ArrayXd::Zero(g.size()));
    const HarmonicModel h = oscillator(1, 1);
    const Trajectory still = static_trajectory(1.0, h);
    const double k = 2 * M_PI * 5 / 20.0, dt = 0.37;
    WaveField w(g, Frame::comoving);
    const Eigen::ArrayXd x = g.coordinate(0);
    for (Eigen::Index i = 0; i < w.psi.size(); ++i) w.psi[i] = std::polar(1.0, k * x[i]);
    WaveField expect = w;
    expect.psi *= std::polar(1.0, -0.5 * k * k * dt);
    prop.step(w, still, 0.0, dt);
    CHECK((w.psi - expect.psi).abs().maxCoeff() < 1e-13);
    CHECK(w.time == doctest::Approx(dt));
}

TEST_CASE("steps are unitary on a lattice potential along a moving path") {
    const LatticeParams p = verify::dwol_params(300);
    const HarmonicModel h = harmonic_approximation(p, Confinement::Planar);
    const GridSpec g = default_planar_grid(p, 64, 64);
    SplitStepPropagator prop(g, sample_potential(g, p, h, PotentialModel::full));
    const Trajectory traj = design_sta({Direction::diagonal, 40 * h.l_x, 3 * h.t_x}, h);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01;
    WaveField w(g, Frame::comoving);
    for (Eigen::Index i = 0; i < w.psi.size(); ++i) w.psi[i] = cd(n01(rng), n01(rng));
    w.normalize();
    double t = 0, worst = 0;
    const double dt = traj.t_f / 40;
    for (int s = 0; s < 40; ++s, t += dt) {
        prop.step(w, traj, t, dt);
        worst = std::max(worst, std::abs(w.norm_squared() - 1));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("coherent state oscillates classically in a static trap") {
    const double omega = 2.0, x0 = 1.5;
    const GridSpec g = centered_grid({256, 1, 1}, {24.0, 1.0, 1.0}, Eigen::Vector3d::Zero());
    const Eigen::ArrayXd x = g.coordinate(0);
    SplitStepPropagator prop(g, 0.5 * omega * omega * x.square());
    const HarmonicModel h = oscillator(omega, omega);
    const WaveField w0 = gaussian(g, x0, 0, omega, omega);
    for (double tf : {0.3, 1.1, 2.4}) {
        const Trajectory still = static_trajectory(tf, h);
        const PropagationResult r = prop.propagate(w0, still, fixed_steps(tf, 4000));
        CHECK(mean_x(r.psi) == doctest::Approx(x0 * std::cos(omega * tf)).epsilon(1e-6));
    }
}

TEST_CASE("harmonic ground state is stationary and the propagator composes") {
    const HarmonicModel h = oscillator(1.5, 2.5);
    const GridSpec g = centered_grid({64, 64, 1}, {16 * h.l_x, 16 * h.l_y, 1.0}, Eigen::Vector3d::Zero());
    const Eigen::ArrayXd x = g.coordinate(0), y = g.coordinate(1);
    SplitStepPropagator prop(g, 0.5 * (2.25 * x.square() + 6.25 * y.square()));
    const WaveField g0 = harmonic_ground_state(g, h);
    const double tf = 3.0;
    const PropagationResult r = prop.propagate(g0, static_trajectory(tf, h), fixed_steps(tf, 300));
    CHECK(fidelity(r.psi, g0) >= 1 - 1e-8);
    CHECK(r.norm_drift <= 1e-12);

    const WaveField start = gaussian(g, 0.7, -0.3, 1.5, 2.5);
    const PropagationResult whole = prop.propagate(start, static_trajectory(tf, h), fixed_steps(tf, 200));
    const PropagationResult first = prop.propagate(start, static_trajectory(tf / 2, h), fixed_steps(tf / 2, 100));
    const PropagationResult second =
        prop.propagate(first.psi, static_trajectory(tf / 2, h), fixed_steps(tf / 2, 100));
    CHECK(l2_distance(whole.psi, second.psi) <= 1e-11);
}

TEST_CASE("fixed-step error converges at second order") {
    const HarmonicModel h = oscillator(1.0, 1.0);
    const GridSpec g = centered_grid({128, 1, 1}, {30.0, 1.0, 1.0}, Eigen::Vector3d::Zero());
    const Eigen::ArrayXd x = g.coordinate(0);
    SplitStepPropagator prop(g, 0.5 * x.square() + 0.05 * x.pow(4) / 4);
    const WaveField w0 = gaussian(g, 1.0, 0, 1.0, 1.0);
    const double tf = 2.0;
    const Trajectory still = static_trajectory(tf, h);
    const WaveField ref = prop.propagate(w0, still, fixed_steps(tf, 8192)).psi;
    const double e1 = l2_distance(prop.propagate(w0, still, fixed_steps(tf, 64)).psi, ref);
    const double e2 = l2_distance(prop.propagate(w0, still, fixed_steps(tf, 128)).psi, ref);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("comoving propagation matches free lab-frame evolution") {
    // A stiff trap keeps the path close to the minimal polynomial so the comoving momenta stay resolved.
    const HarmonicModel h = oscillator(10.0, 10.0);
    const GridSpec g = centered_grid({192, 192, 1}, {60.0, 60.0, 1.0}, Eigen::Vector3d::Zero());
    const Trajectory traj = design_sta({Direction::diagonal, 8.0, 4.0}, h);
    double vmax = 0;
    for (int i = 0; i <= 100; ++i) vmax = std::max(vmax, traj.velocity(i * traj.t_f / 100).cwiseAbs().maxCoeff());
    REQUIRE(vmax < 0.4 * g.axis_wavenumbers(0).abs().maxCoeff());
    const WaveField lab0 = gaussian(g, -1.0, 0.5, 0.8, 0.6, Frame::lab);
    SplitStepPropagator prop(g, Eigen::ArrayXd::Zero(g.size()));
    const PropagationResult r =
        prop.propagate(comoving_transform(lab0, traj, 0.0), traj, fixed_steps(traj.t_f, 1000));
    const WaveField lab = lab_transform(r.psi, traj, traj.t_f);

    WaveField free = lab0;
    const Fft fft(g);
    const Eigen::ArrayXd kx = g.wavenumber(0), ky = g.wavenumber(1);
    fft.forward(free.psi);
    for (Eigen::Index i = 0; i < free.psi.size(); ++i)
        free.psi[i] *= std::polar(1.0, -0.5 * (kx[i] * kx[i] + ky[i] * ky[i]) * traj.t_f);
    fft.backward(free.psi);
    INFO("infidelity " << 1 - fidelity(lab, free));
    CHECK(fidelity(lab, free) >= 1 - 1e-8);
}

TEST_CASE("frame transforms") {
    const HarmonicModel h = oscillator(1.0, 1.0);
    const GridSpec g = centered_grid({64, 64, 1}, {40.0, 40.0, 1.0}, Eigen::Vector3d::Zero());
    const Trajectory traj = design_sta({Direction::x, 5.0, 3.0}, h);
    const WaveField lab = gaussian(g, 0.3, -0.2, 1.0, 1.0, Frame::lab);
    const WaveField still = comoving_transform(lab, static_trajectory(3.0, h), 1.0);
    CHECK(still.frame == Frame::comoving);
    CHECK((still.psi - lab.psi).abs().maxCoeff() < 1e-14);
    for (double t : {0.4, 1.5, 2.9}) {
        const WaveField back = lab_transform(comoving_transform(lab, traj, t), traj, t);
        CHECK(l2_distance(back, lab) < 1e-12);
        const WaveField co = comoving_transform(lab, traj, t);
        CHECK(mean_x(co) == doctest::Approx(0.3 - traj.position(0, t)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(lab_transform(lab, traj, 0.0), FrameMismatch);
    CHECK_THROWS_AS(comoving_transform(still, traj, 0.0), FrameMismatch);
    SplitStepPropagator prop(g, Eigen::ArrayXd::Zero(g.size()));
    WaveField wrong = lab;
    CHECK_THROWS_AS(prop.step(wrong, traj, 0, 0.1), FrameMismatch);
    CHECK_THROWS_AS(prop.propagate(lab, traj, {}), FrameMismatch);
    const GridSpec other = centered_grid({32, 64, 1}, {40.0, 40.0, 1.0}, Eigen::Vector3d::Zero());
    WaveField mismatched(other, Frame::comoving);
    CHECK_THROWS_AS(prop.step(mismatched, traj, 0, 0.1), GridMismatch);
    CHECK_THROWS_AS(SplitStepPropagator(g, Eigen::ArrayXd::Zero(10)), GridMismatch);
}

TEST_CASE("overlaps of displaced Gaussians") {
    const HarmonicModel h = oscillator(2.0, 2.0);
    const GridSpec g = centered_grid({256, 1, 1}, {30 * h.l_x, 1.0, 1.0}, Eigen::Vector3d::Zero());
    const WaveField a = harmonic_ground_state(g, h);
    CHECK(a.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    for (double d : {0.1, 0.5, 1.3}) {
        const WaveField b = gaussian(g, d, 0, 2.0, 2.0);
        CHECK(fidelity(a, b) == doctest::Approx(std::exp(-d * d / (4 * h.l_x * h.l_x))).epsilon(1e-10));
    }
    WaveField first = a;
    const Eigen::ArrayXd x = g.coordinate(0);
    first.psi *= x;
    first.normalize();
    CHECK(std::abs(overlap(a, first)) < 1e-14);
    CHECK(l2_distance(a, a) == 0.0);
}

TEST_CASE("boundary ratio") {
    const GridSpec g = centered_grid({64, 64, 1}, {20.0, 20.0, 1.0}, Eigen::Vector3d::Zero());
    CHECK(boundary_ratio(gaussian(g, 0, 0, 2.0, 2.0)) < 1e-20);
    WaveField flat(g, Frame::comoving);
    flat.psi.setConstant(1.0);
    CHECK(boundary_ratio(flat) == doctest::Approx(1.0));
    const WaveField offset = gaussian(g, 9.0, 0, 2.0, 2.0);
    CHECK(boundary_ratio(offset) > 1e-3);
}

TEST_CASE("guard flags or aborts on boundary contamination") {
    const HarmonicModel h = oscillator(1.0, 1.0);
    const GridSpec g = centered_grid({64, 1, 1}, {16.0, 1.0, 1.0}, Eigen::Vector3d::Zero());
    SplitStepPropagator prop(g, Eigen::ArrayXd::Zero(g.size()));
    const WaveField w0 = gaussian(g, 0, 0, 1.0, 1.0);
    PropagationConfig cfg = fixed_steps(6.0, 100);
    const PropagationResult r = prop.propagate(w0, static_trajectory(6.0, h), cfg);
    CHECK(r.boundary_flag);
    CHECK(r.max_boundary_ratio > cfg.guard_threshold);
    cfg.guard_action = GuardAction::abort;
    CHECK_THROWS_AS(prop.propagate(w0, static_trajectory(6.0, h), cfg), BoundaryContamination);
}

TEST_CASE("snapshots are taken at the requested times") {
    const HarmonicModel h = oscillator(2.0, 2.0);
    const GridSpec g = centered_grid({128, 1, 1}, {24.0, 1.0, 1.0}, Eigen::Vector3d::Zero());
    const Eigen::ArrayXd x = g.coordinate(0);
    SplitStepPropagator prop(g, 2.0 * x.square());
    std::vector<WaveField> snaps;
    const PropagationResult r = prop.propagate(gaussian(g, 1.0, 0, 2.0, 2.0), static_trajectory(2.0, h),
                                               PropagationConfig{}, {0.5, 1.25, 7.0}, &snaps);
    REQUIRE(snaps.size() == 2);
    CHECK(snaps[0].time == doctest::Approx(0.5));
    CHECK(snaps[1].time == doctest::Approx(1.25));
    CHECK(mean_x(snaps[0]) == doctest::Approx(std::cos(1.0)).epsilon(1e-3));
    CHECK(r.psi.time == 2.0);
}

TEST_CASE("imaginary-time relaxation in a tilted harmonic trap") {
    const double wx = 1.5, wy = 2.5, a = 0.8;
    const HarmonicModel h = oscillator(wx, wy);
    const GridSpec g = centered_grid({64, 64, 1}, {20 * h.l_x, 20 * h.l_y, 1.0},
                                     Eigen::Vector3d(-a / (wx * wx), 0, 0));
    const Eigen::ArrayXd x = g.coordinate(0), y = g.coordinate(1);
    const Eigen::ArrayXd v = 0.5 * (wx * wx * x.square() + wy * wy * y.square()) + a * x;
    IteConfig cfg;
    cfg.dtau = 0.2;
    const IteResult r = ite_ground_state(g, v, cfg);
    CHECK(r.energy == doctest::Approx(0.5 * (wx + wy) - a * a / (2 * wx * wx)).epsilon(1e-8));
    CHECK(r.psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(r.energy_history.size() > 2);
    for (std::size_t i = 1; i < r.energy_history.size(); ++i)
        CHECK(r.energy_history[i] <= r.energy_history[i - 1] + 1e-12);
    const Fft fft(g);
    CHECK(energy_expectation(r.psi, v, fft) == doctest::Approx(r.energy).epsilon(1e-12));
    CHECK(mean_x(r.psi) == doctest::Approx(-a / (wx * wx)).epsilon(1e-8));
}

TEST_CASE("wave field files") {
    const GridSpec g = centered_grid({8, 6, 4}, {4.0, 3.0, 2.0}, Eigen::Vector3d(0.5, -1.0, 2.0));
    WaveField w(g, Frame::lab);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (Eigen::Index i = 0; i < w.psi.size(); ++i) w.psi[i] = cd(n01(rng), n01(rng));
    const std::string path = "test_dynamics_field.bin";
    write_wavefield(path, w);
    const WaveField r = read_wavefield(path);
    CHECK(r.grid.n == g.n);
    CHECK(r.frame == Frame::lab);
    CHECK((r.psi - w.psi).abs().maxCoeff() == 0.0);
    for (int a = 0; a < 3; ++a) {
        CHECK(r.grid.spacing(a) == doctest::Approx(g.spacing(a)).epsilon(1e-15));
        CHECK(r.grid.origin[a] == g.origin[a]);
    }

    std::ifstream is(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const std::size_t header = 8 + 4 + 3 * 4 + 3 * 8 + 3 * 8 + 1;
    REQUIRE(bytes.size() == header + 16 * static_cast<std::size_t>(g.size()));
    CHECK(std::memcmp(bytes.data(), "DWOLWF\0\0", 8) == 0);
    std::uint32_t version = 0, nx = 0;
    std::memcpy(&version, bytes.data() + 8, 4);
    std::memcpy(&nx, bytes.data() + 12, 4);
    CHECK(version == 1);
    CHECK(nx == 8);
    double dx = 0, ox = 0;
    std::memcpy(&dx, bytes.data() + 24, 8);
    std::memcpy(&ox, bytes.data() + 48, 8);
    CHECK(dx == 0.5);
    CHECK(ox == g.origin[0]);
    CHECK(bytes[header - 1] == 0);
    std::remove(path.c_str());

    std::ofstream bad("test_dynamics_bad.bin", std::ios::binary);
    bad << "NOTAFIELD";
    bad.close();
    CHECK_THROWS_AS(read_wavefield("test_dynamics_bad.bin"), Error);
    std::remove("test_dynamics_bad.bin");
}

TEST_CASE("transport experiment reuses one ground state") {
    TransportSetup s;
    s.lattice = verify::dwol_params(300);
    s.grid = default_planar_grid(s.lattice, 64, 64);
    TransportExperiment ex(s);
    CHECK(ex.ground_state().norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ex.ite_iterations() > 0);
    const HarmonicModel& h = ex.harmonic();
    const Fft fft(ex.ground_state().grid);
    CHECK(ex.ground_energy() == doctest::Approx(energy_expectation(
                                    ex.ground_state(), sample_potential(s.grid, s.lattice, h, s.model), fft)));
    const TransportOutcome still = ex.run(static_trajectory(2 * h.t_x, h), {0.5});
    INFO("infidelity " << 1 - still.fidelity);
    CHECK(still.fidelity >= 1 - 1e-6);
    CHECK(still.snapshots.size() == 1);
    CHECK(still.norm_drift <= 1e-10);
    const TransportOutcome slow = ex.run(design_sta({Direction::x, 10 * h.l_x, 10 * h.t_x}, h));
    CHECK(slow.fidelity >= 0.99);
}
