#include "dwol/esta.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "dwol/diagnostics.hpp"
#include "dwol/errors.hpp"

namespace dwol {

namespace {

using cd = std::complex<double>;

bool same_factor(const Factor1D& a, const Factor1D& b) {
    return a.power == b.power && a.gauss == b.gauss && a.k == b.k && a.trig == b.trig;
}

Factor1D cos_factor(double k, double gauss = 0) { return {0, gauss, k, Trig::cos}; }
Factor1D sin_factor(double k, double gauss = 0) { return {0, gauss, k, Trig::sin}; }
Factor1D env_factor(double gauss) { return {0, gauss, 0, Trig::none}; }
Factor1D monomial(int p) { return {p, 0, 0, Trig::none}; }

double mode_weight(int n) { return 1 / std::sqrt(std::pow(2.0, n) * factorial(n) * std::numbers::pi); }

}  // namespace

std::vector<ModeIndex> enumerate_modes(int cutoff, bool planar) {
    if (cutoff < 1) throw InvalidParameters("eSTA cut-off must be at least 1");
    std::vector<ModeIndex> out;
    for (int total = 1; total <= cutoff; ++total)
        for (int nx = total; nx >= 0; --nx)
            for (int ny = total - nx; ny >= 0; --ny) {
                const int nz = total - nx - ny;
                if (planar && nz != 0) continue;
                out.push_back({nx, ny, nz});
            }
    return out;
}

double oscillator_mode(int n, double l, double xi) {
    const double norm = 1 / std::sqrt(std::pow(2.0, n) * factorial(n) * std::sqrt(std::numbers::pi) * std::sqrt(2.0) * l);
    return norm * hermite(n, xi / (std::sqrt(2.0) * l)) * std::exp(-xi * xi / (4 * l * l));
}

TransportModes::TransportModes(const HarmonicModel& h, const Trajectory& sta) : h_(h), traj_(sta) {
    for (int a = 0; a < 2; ++a) {
        const Axis axis = a == 0 ? Axis::x : Axis::y;
        const double omega = a == 0 ? h.omega_x : h.omega_y;
        qc_[a] = classical_path(sta, h, axis);
        // Lagrangian along the classical path: m qc'^2 / 2 - m omega^2 (qc - X0)^2 / 2.
        Polynomial diff = qc_[a] - sta.axes[a].q;
        if (a == 0) diff += Polynomial::constant(h.a_x / (omega * omega));
        const Polynomial v = qc_[a].derivative() * (1 / sta.t_f);
        const Polynomial lagrangian = (0.5 * h.mass) * (v * v) - (0.5 * h.mass * omega * omega) * (diff * diff);
        action_[a] = lagrangian.integral() * sta.t_f;
    }
}

Eigen::Vector3d TransportModes::center(double t) const {
    const double s = t / traj_.t_f;
    return {qc_[0](s) + h_.x_e, qc_[1](s), 0.0};
}

Eigen::Vector3d TransportModes::center_velocity(double t) const {
    const double s = t / traj_.t_f;
    return {qc_[0].derivative()(s) / traj_.t_f, qc_[1].derivative()(s) / traj_.t_f, 0.0};
}

double TransportModes::energy(const ModeIndex& n) const {
    return kHbar * (h_.omega_x * (n.nx + 0.5) + h_.omega_y * (n.ny + 0.5) + h_.omega_z * (n.nz + 0.5)) -
           h_.mass * h_.a_x * h_.a_x / (2 * h_.omega_x * h_.omega_x) - h_.v_d0;
}

double TransportModes::action(double t) const {
    const double s = t / traj_.t_f;
    return action_[0](s) + action_[1](s);
}

std::complex<double> TransportModes::operator()(const ModeIndex& n, double t, const Eigen::Vector3d& r) const {
    const Eigen::Vector3d c = center(t), v = center_velocity(t);
    const Eigen::Vector3d xi = r - c;
    const double amp = oscillator_mode(n.nx, h_.l_x, xi.x()) * oscillator_mode(n.ny, h_.l_y, xi.y()) *
                       oscillator_mode(n.nz, h_.l_z, xi.z());
    const double phase = h_.mass * (v.x() * xi.x() + v.y() * xi.y()) / kHbar +
                         action(t) / kHbar - energy(n) * t / kHbar;
    return amp * std::polar(1.0, phase);
}

std::complex<double> transport_mode(const ModeIndex& n, const HarmonicModel& h, const Trajectory& sta, double t,
                                    const Eigen::Vector3d& r) {
    return TransportModes(h, sta)(n, t, r);
}

double CorrectionBasis::value(int j, double s) const {
    if (policy == BasisPolicy::exact15) {
        const double w = std::pow(s, 5) * std::pow(1 - s, 5);
        return w * reduced_.at(j)(s);
    }
    return basis.at(j)(s);
}

double CorrectionBasis::derivative(int j, int order, double s) const {
    if (order == 0) return value(j, s);
    return basis.at(j).derivative(order)(s);
}

CorrectionBasis correction_basis(BasisPolicy policy) {
    CorrectionBasis out;
    out.policy = policy;
    Eigen::VectorXd knots(6);
    for (int k = 0; k < 6; ++k) knots[k] = (k + 1) / 7.0;

    if (policy == BasisPolicy::exact15) {
        // f = s^5 (1-s)^5 g with deg g = 5 satisfies all endpoint conditions; the knots fix g.
        out.degree = 15;
        Eigen::VectorXd wc = Eigen::VectorXd::Zero(11);
        wc[5] = 1 / Polynomial::choose(10, 5);
        const Polynomial w = Polynomial::bernstein(wc);
        Eigen::MatrixXd m(6, 6);
        for (int k = 0; k < 6; ++k)
            for (int i = 0; i < 6; ++i)
                m(k, i) = w(knots[k]) * Polynomial::bernstein(Eigen::VectorXd::Unit(6, i))(knots[k]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        if (!lu.isInvertible()) throw SingularSystem("knot interpolation system is singular");
        const Eigen::MatrixXd c = lu.solve(Eigen::MatrixXd::Identity(6, 6));
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
        out.condition_number = sv[0] / sv[sv.size() - 1];
        for (int j = 0; j < 6; ++j) {
            out.reduced_[j] = Polynomial::bernstein(Eigen::VectorXd(c.col(j)));
            out.basis[j] = w * out.reduced_[j];
        }
        return out;
    }

    // Degree 11: 10 endpoint rows, 6 knot rows, least squares over the Bernstein coefficients.
    out.degree = 11;
    const int ncoef = 12;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(16, ncoef);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(16, 6);
    for (int i = 0; i < ncoef; ++i) {
        const Polynomial unit = Polynomial::bernstein(Eigen::VectorXd::Unit(ncoef, i));
        for (int order = 0; order <= 4; ++order) {
            const Polynomial d = unit.derivative(order);
            a(2 * order, i) = d(0.0);
            a(2 * order + 1, i) = d(1.0);
        }
        for (int k = 0; k < 6; ++k) a(10 + k, i) = unit(knots[k]);
    }
    for (int k = 0; k < 6; ++k) rhs(10 + k, k) = 1;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv[sv.size() - 1] <= 1e-14 * sv[0]) throw SingularSystem("degree-11 least-squares system is rank deficient");
    out.condition_number = sv[0] / sv[sv.size() - 1];
    const Eigen::MatrixXd c = svd.solve(rhs);
    for (int j = 0; j < 6; ++j) out.basis[j] = Polynomial::bernstein(Eigen::VectorXd(c.col(j)));
    return out;
}

std::vector<SeparableTerm> potential_expansion(const LatticeParams& p) {
    const double u0 = p.u_d0, kl = p.k_L, kz = p.k_z;
    const double cb = std::cos(p.beta / 2), sb = std::sin(p.beta / 2);
    const double c2 = cb * cb, s2 = sb * sb;
    const Factor1D one{};
    std::vector<SeparableTerm> t = {
        {-u0 * c2, {one, cos_factor(2 * kl), one}},
        {u0 * c2, {cos_factor(2 * kl), one, one}},
        {-2 * u0 * c2, {one, one, one}},
        {-2 * u0 * s2, {one, one, one}},
        {-u0 * s2, {one, cos_factor(2 * kl), one}},
        {u0 * s2 * std::cos(2 * p.theta), {cos_factor(2 * kl), one, one}},
        {u0 * s2 * std::sin(2 * p.theta), {sin_factor(2 * kl), one, one}},
        {4 * u0 * s2 * std::cos(p.theta), {sin_factor(kl), cos_factor(kl), one}},
        {-4 * u0 * s2 * std::sin(p.theta), {cos_factor(kl), cos_factor(kl), one}},
    };
    if (p.xi_z > 0) {
        const double ex = 1 / (p.w0x * p.w0x), ey = 1 / (p.w0y * p.w0y);
        const double cr = 2 * std::sqrt(p.xi_z) * cb;
        t.push_back({-u0 * p.xi_z / 2, {env_factor(2 * ex), env_factor(2 * ey), one}});
        t.push_back({-u0 * p.xi_z / 2, {env_factor(2 * ex), env_factor(2 * ey), cos_factor(2 * kz)}});
        t.push_back({-u0 * cr * std::cos(p.phi / 2), {env_factor(ex), cos_factor(kl, ey), cos_factor(kz)}});
        t.push_back({u0 * cr * std::sin(p.phi / 2), {sin_factor(kl, ex), env_factor(ey), cos_factor(kz)}});
    }
    std::erase_if(t, [](const SeparableTerm& s) { return s.coef == 0; });
    return t;
}

std::vector<SeparableTerm> harmonic_expansion(const HarmonicModel& h) {
    const Factor1D one{};
    const double m = h.mass, xe = h.x_e;
    const double wx2 = h.omega_x * h.omega_x, wy2 = h.omega_y * h.omega_y, wz2 = h.omega_z * h.omega_z;
    std::vector<SeparableTerm> t = {
        {-h.v_d0 - m * h.a_x * xe + 0.5 * m * wx2 * xe * xe, {one, one, one}},
        {m * h.a_x - m * wx2 * xe, {monomial(1), one, one}},
        {0.5 * m * wx2, {monomial(2), one, one}},
        {0.5 * m * wy2, {one, monomial(2), one}},
        {0.5 * m * wz2, {one, one, monomial(2)}},
    };
    std::erase_if(t, [](const SeparableTerm& s) { return s.coef == 0; });
    return t;
}

double evaluate_expansion(const std::vector<SeparableTerm>& terms, const Eigen::Vector3d& u) {
    double v = 0;
    for (const auto& t : terms) v += t.coef * t.f[0](u.x()) * t.f[1](u.y()) * t.f[2](u.z());
    return v;
}

namespace {

struct IndexedTerm {
    double coef;
    std::array<int, 3> idx;
};

class FactorTable {
public:
    int add(const Factor1D& f) {
        for (std::size_t i = 0; i < items.size(); ++i)
            if (same_factor(items[i], f)) return static_cast<int>(i);
        items.push_back(f);
        return static_cast<int>(items.size()) - 1;
    }
    std::vector<Factor1D> items;
};

struct Assembly {
    std::array<FactorTable, 3> factors;
    std::vector<IndexedTerm> delta;                 // U_D - V_D
    std::array<std::vector<IndexedTerm>, 2> grad;  // dU_D/du along x and y

    void add(std::vector<IndexedTerm>& dst, double coef, const std::array<Factor1D, 3>& f) {
        dst.push_back({coef, {factors[0].add(f[0]), factors[1].add(f[1]), factors[2].add(f[2])}});
    }
};

Assembly build_assembly(const LatticeParams& p, const HarmonicModel& h) {
    Assembly a;
    const auto u = potential_expansion(p);
    for (const auto& t : u) a.add(a.delta, t.coef, t.f);
    for (const auto& t : harmonic_expansion(h)) a.add(a.delta, -t.coef, t.f);
    for (int axis = 0; axis < 2; ++axis)
        for (const auto& t : u)
            for (const auto& [w, d] : t.f[axis].derivative()) {
                auto f = t.f;
                f[axis] = d;
                a.add(a.grad[axis], t.coef * w, f);
            }
    return a;
}

}  // namespace

std::vector<ModeContribution> auxiliary_functions(const std::vector<ModeIndex>& modes, const Trajectory& sta,
                                                  const LatticeParams& p, const HarmonicModel& h,
                                                  const CorrectionBasis& basis, const EstaOptions& opt,
                                                  int* panels) {
    if (modes.empty()) return {};
    for (const auto& m : modes) {
        if (m.total() == 0) throw InvalidParameters("the ground mode has no G_n/K_n");
        if (opt.planar && m.nz != 0) throw InvalidParameters("planar evaluation only supports n_z = 0");
    }
    const Assembly as = build_assembly(p, h);
    const Polynomial qcx = classical_path(sta, h, Axis::x);
    const Polynomial qcy = classical_path(sta, h, Axis::y);
    std::array<int, 3> nmax{0, 0, 0};
    for (const auto& m : modes) {
        nmax[0] = std::max(nmax[0], m.nx);
        nmax[1] = std::max(nmax[1], m.ny);
        nmax[2] = std::max(nmax[2], m.nz);
    }
    const std::array<double, 3> lengths{h.l_x, h.l_y, h.l_z};
    const double tf = sta.t_f;
    const int nm = static_cast<int>(modes.size());

    auto integrand = [&](double t) {
        const double s = t / tf;
        const std::array<double, 3> lag{qcx(s) + h.x_e - sta.axes[0].q(s), qcy(s) - sta.axes[1].q(s), 0.0};
        // vals[axis][n][factor] = <phi_n | g(u) | phi_0> along one axis.
        std::array<std::vector<std::vector<cd>>, 3> vals;
        for (int a = 0; a < 3; ++a) {
            const auto& items = as.factors[a].items;
            vals[a].assign(nmax[a] + 1, std::vector<cd>(items.size()));
            for (int n = 0; n <= nmax[a]; ++n)
                for (std::size_t i = 0; i < items.size(); ++i) {
                    if (a == 2 && opt.planar)
                        vals[a][n][i] = items[i](0.0);
                    else
                        vals[a][n][i] =
                            mode_weight(n) * hermite_factor_integral(n, lengths[a], lag[a], items[i], opt.hermite);
                }
        }
        std::array<double, 6> b{};
        for (int j = 0; j < 6; ++j) b[j] = basis.value(j, s);
        Eigen::VectorXcd out(13 * nm);
        for (int k = 0; k < nm; ++k) {
            const ModeIndex& m = modes[k];
            auto sum = [&](const std::vector<IndexedTerm>& terms) {
                cd acc = 0;
                for (const auto& term : terms)
                    acc += term.coef * vals[0][m.nx][term.idx[0]] * vals[1][m.ny][term.idx[1]] *
                           vals[2][m.nz][term.idx[2]];
                return acc;
            };
            const double omega = m.nx * h.omega_x + m.ny * h.omega_y + m.nz * h.omega_z;
            const cd phase = std::polar(1.0, omega * t) / kHbar;
            const cd g = sum(as.delta);
            const cd dx = sum(as.grad[0]), dy = sum(as.grad[1]);
            out[13 * k] = phase * g;
            for (int j = 0; j < 6; ++j) {
                out[13 * k + 1 + j] = -phase * b[j] * dx;
                out[13 * k + 7 + j] = -phase * b[j] * dy;
            }
        }
        return out;
    };

    double omega_max = 0;
    for (const auto& m : modes) omega_max = std::max(omega_max, m.nx * h.omega_x + m.ny * h.omega_y + m.nz * h.omega_z);
    const double sweep = 2 * p.k_L * (std::abs(sta.axes[0].distance) + std::abs(sta.axes[1].distance));
    QuadratureOptions q = opt.quad;
    q.initial_panels =
        std::max(q.initial_panels, static_cast<int>(std::ceil((omega_max * tf + sweep) / std::numbers::pi)) + 1);
    const QuadratureResult r = integrate_gk(integrand, 0.0, tf, q);
    if (panels) *panels = r.panels;

    std::vector<ModeContribution> out;
    for (int k = 0; k < nm; ++k) out.push_back({modes[k], r.value[13 * k], r.value.segment(13 * k + 1, 12)});
    return out;
}

std::complex<double> g_n(const ModeIndex& n, const Trajectory& sta, const LatticeParams& p, const HarmonicModel& h,
                         const EstaOptions& opt) {
    return auxiliary_functions({n}, sta, p, h, correction_basis(opt.basis), opt).front().g;
}

Eigen::VectorXcd k_n(const ModeIndex& n, const Trajectory& sta, const CorrectionBasis& basis,
                     const LatticeParams& p, const HarmonicModel& h, const EstaOptions& opt) {
    return auxiliary_functions({n}, sta, p, h, basis, opt).front().k;
}

EstaCorrection correction_from_modes(std::vector<ModeContribution> modes, int cutoff) {
    EstaCorrection c;
    c.cutoff = cutoff;
    double g2 = 0;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(12);
    for (const auto& m : modes) {
        g2 += std::norm(m.g);
        v += (std::conj(m.g) * m.k).real();
    }
    c.modes = std::move(modes);
    c.fidelity_estimate = 1 - g2 / (kHbar * kHbar);
    if (g2 == 0) {
        c.diagnostic = "all G_n vanish; STA is optimal to this order and epsilon = 0";
        return c;
    }
    const double v2 = v.squaredNorm();
    if (v2 == 0) {
        c.degenerate = true;
        c.diagnostic = "sum Re(G_n* K_n) vanishes while sum |G_n|^2 > 0; epsilon set to 0";
        emit_diagnostic(c.diagnostic);
        return c;
    }
    c.epsilon = -g2 * v / v2;
    if (!(c.fidelity_estimate > 0 && c.fidelity_estimate <= 1))
        c.diagnostic = "estimated fidelity 1 - sum|G_n|^2 lies outside (0, 1]; perturbative regime exceeded";
    return c;
}

EstaCorrection esta_correction(const Trajectory& sta, const LatticeParams& p, const HarmonicModel& h,
                               const EstaOptions& opt) {
    const auto modes = enumerate_modes(opt.cutoff, opt.planar);
    int panels = 0;
    auto contributions = auxiliary_functions(modes, sta, p, h, correction_basis(opt.basis), opt, &panels);
    EstaCorrection c = correction_from_modes(std::move(contributions), opt.cutoff);
    c.quadrature_panels = panels;
    if (!c.diagnostic.empty() && !c.degenerate) emit_diagnostic(c.diagnostic);
    return c;
}

Trajectory apply_correction(const Trajectory& sta, const Eigen::VectorXd& epsilon, const CorrectionBasis& basis) {
    if (epsilon.size() != 12) throw InvalidParameters("correction vector must have 12 components");
    Trajectory out = sta;
    out.provenance = Provenance::ESTA;
    out.epsilon = epsilon;
    for (int a = 0; a < 2; ++a)
        for (int j = 0; j < 6; ++j)
            if (epsilon[6 * a + j] != 0) out.axes[a].q += basis.basis[j] * epsilon[6 * a + j];
    return out;
}

Trajectory design_esta(const TransportSpec& spec, const LatticeParams& p, const HarmonicModel& h,
                       const EstaOptions& opt, EstaCorrection* report) {
    const Trajectory sta = design_sta(spec, h);
    EstaCorrection c = esta_correction(sta, p, h, opt);
    Trajectory out = apply_correction(sta, c.epsilon, correction_basis(opt.basis));
    if (report) *report = std::move(c);
    return out;
}

}  // namespace dwol
