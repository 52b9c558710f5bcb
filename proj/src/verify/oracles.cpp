#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dwol/errors.hpp"
#include "dwol/verify.hpp"

namespace dwol::verify {

namespace {

using cd = std::complex<double>;

double hermite_value(int n, double x) {
    double h0 = 1, h1 = 2 * x;
    if (n == 0) return h0;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2 * x * h1 - 2 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

double mode_value(int n, double l, double xi) {
    double fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double norm = 1 / std::sqrt(std::pow(2.0, n) * fact * std::sqrt(std::numbers::pi) * std::sqrt(2.0) * l);
    const double y = xi / (std::sqrt(2.0) * l);
    return norm * hermite_value(n, y) * std::exp(-0.5 * y * y);
}

}  // namespace

Rule gauss_hermite(int n) {
    // Golub-Welsch for the nodes, Newton polish and the closed weight formula.
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    Rule r{es.eigenvalues(), Eigen::VectorXd(n)};
    double fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    for (int i = 0; i < n; ++i) {
        double x = r.nodes[i];
        for (int it = 0; it < 3; ++it) {
            const double hn = hermite_value(n, x);
            const double dhn = 2 * n * hermite_value(n - 1, x);
            x -= hn / dhn;
        }
        r.nodes[i] = x;
        const double hm = hermite_value(n - 1, x);
        r.weights[i] = std::pow(2.0, n - 1) * fact * std::sqrt(std::numbers::pi) / (n * n * hm * hm);
    }
    return r;
}

QuadValue hermite_kind_quadrature(HermiteKind kind, const AxisFrame& f, const KindArgs& a) {
    const double s2l = std::sqrt(2.0) * f.l;
    const double center = kind == HermiteKind::Iz ? 0.0 : f.center;
    const double shift = kind == HermiteKind::Iz ? 0.0 : f.shift;
    const double w2 = a.waist * a.waist;
    auto weight = [&](double x) {
        const double u = x - shift;
        const double x0 = u / s2l;
        switch (kind) {
            case HermiteKind::ID: return std::cos(2 * a.k * u);
            case HermiteKind::IDS: return std::sin(2 * a.k * u);
            case HermiteKind::ID2: return std::exp(-2 * u * u / w2);
            case HermiteKind::ID2t: return x0 * std::exp(-2 * u * u / w2);
            case HermiteKind::ID3: return std::cos(a.k * u) * std::exp(-u * u / w2);
            case HermiteKind::ID3t: return x0 * std::cos(a.k * u) * std::exp(-u * u / w2);
            case HermiteKind::ID3S: return std::sin(a.k * u) * std::exp(-u * u / w2);
            case HermiteKind::ID3St: return x0 * std::sin(a.k * u) * std::exp(-u * u / w2);
            case HermiteKind::ID4: return x0 * x0;
            case HermiteKind::Ie: return x0;
            case HermiteKind::Iz:
                switch (a.z) {
                    case ZTerm::one: return 1.0;
                    case ZTerm::cos: return std::cos(a.k * u);
                    case ZTerm::cos_sq: return std::cos(a.k * u) * std::cos(a.k * u);
                    case ZTerm::quadratic: return x0 * x0;
                }
        }
        return 0.0;
    };
    // Integrate in X_C = (x - center) / (sqrt2 l); dX = dX_C.
    auto integrand = [&](double xc) {
        return hermite_value(f.n, xc) * std::exp(-xc * xc) * weight(center + s2l * xc);
    };
    QuadValue q;
    double err = 0;
    q.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -11.0, 11.0, 20, 1e-15, &err,
                                                                            &q.l1);
    return q;
}

std::vector<ModeContribution> brute_force_auxiliary(const std::vector<ModeIndex>& modes, const Trajectory& sta,
                                                    const LatticeParams& p, const HarmonicModel& h,
                                                    const CorrectionBasis& basis, const OracleOptions& opt,
                                                    std::vector<ModeContribution>* l1) {
    LatticeParams frozen = p;
    frozen.z_Rx = frozen.z_Ry = 1e300;
    const TransportModes tm(h, sta);
    const Rule gh = gauss_hermite(opt.space_nodes);
    const int nq = opt.space_nodes;
    const std::array<int, 3> count{nq, nq, opt.planar ? 1 : nq};
    const std::array<double, 3> len{h.l_x, h.l_y, h.l_z};
    std::array<int, 3> nmax{0, 0, 0};
    double omega_max = 0;
    for (const auto& m : modes) {
        nmax[0] = std::max(nmax[0], m.nx);
        nmax[1] = std::max(nmax[1], m.ny);
        nmax[2] = std::max(nmax[2], m.nz);
        omega_max = std::max(omega_max, m.nx * h.omega_x + m.ny * h.omega_y + m.nz * h.omega_z);
    }
    const double tf = sta.t_f;
    const double sweep = 2 * p.k_L * (std::abs(sta.axes[0].distance) + std::abs(sta.axes[1].distance));
    const int panels = std::max(4, static_cast<int>(std::ceil((omega_max * tf + sweep) / opt.panel_phase)));

    // Composite Gauss-Legendre rule on [0, t_f].
    std::vector<double> tn, tw;
    {
        using GL = boost::math::quadrature::gauss<double, 12>;
        std::vector<double> xs, ws;
        const auto& ab = GL::abscissa();
        const auto& wt = GL::weights();
        for (std::size_t i = 0; i < ab.size(); ++i) {
            xs.push_back(ab[i]);
            ws.push_back(wt[i]);
            if (ab[i] != 0) {
                xs.push_back(-ab[i]);
                ws.push_back(wt[i]);
            }
        }
        const double hp = tf / panels;
        for (int k = 0; k < panels; ++k)
            for (std::size_t i = 0; i < xs.size(); ++i) {
                tn.push_back((k + 0.5 + 0.5 * xs[i]) * hp);
                tw.push_back(0.5 * hp * ws[i]);
            }
    }

    const int nm = static_cast<int>(modes.size());
    std::vector<cd> g(nm, 0.0);
    std::vector<Eigen::VectorXcd> kv(nm, Eigen::VectorXcd::Zero(12));
    std::vector<double> ag(nm, 0.0);
    std::vector<Eigen::VectorXd> ak(nm, Eigen::VectorXd::Zero(12));
    const Eigen::Index npts = static_cast<Eigen::Index>(count[0]) * count[1] * count[2];
    Eigen::ArrayXd X(npts), Y(npts), Z(npts);
    const double fd = opt.fd_step / p.k_L;

    for (std::size_t it = 0; it < tn.size(); ++it) {
        const double t = tn[it];
        const Eigen::Vector3d c = tm.center(t), v = tm.center_velocity(t);
        const Eigen::Vector3d q0(sta.position(0, t), sta.position(1, t), 0.0);
        // Per-axis node coordinates and weighted products conj(A_n) A_0.
        std::array<std::vector<Eigen::ArrayXcd>, 3> P;
        std::array<Eigen::ArrayXd, 3> coord;
        for (int a = 0; a < 3; ++a) {
            coord[a].resize(count[a]);
            P[a].assign(nmax[a] + 1, Eigen::ArrayXcd(count[a]));
            if (count[a] == 1) {
                coord[a][0] = 0;
                for (int n = 0; n <= nmax[a]; ++n) P[a][n][0] = n == 0 ? 1.0 : 0.0;
                continue;
            }
            const double s2l = std::sqrt(2.0) * len[a];
            for (int i = 0; i < count[a]; ++i) {
                const double xi = s2l * gh.nodes[i];
                coord[a][i] = c[a] + xi;
                const double w = gh.weights[i] * std::exp(gh.nodes[i] * gh.nodes[i]) * s2l;
                const cd kick = std::polar(1.0, h.mass * v[a] * xi / kHbar);
                const cd a0 = mode_value(0, len[a], xi) * kick;
                for (int n = 0; n <= nmax[a]; ++n) P[a][n][i] = w * std::conj(mode_value(n, len[a], xi) * kick) * a0;
            }
        }
        Eigen::Index idx = 0;
        for (int k = 0; k < count[2]; ++k)
            for (int j = 0; j < count[1]; ++j)
                for (int i = 0; i < count[0]; ++i, ++idx) {
                    X[idx] = coord[0][i] - q0.x();
                    Y[idx] = coord[1][j] - q0.y();
                    Z[idx] = coord[2][k];
                }
        const Eigen::ArrayXd delta = evaluate_potential(X, Y, Z, frozen) - harmonic_potential(X, Y, Z, h);
        // Fourth-order central differences.
        auto gradient = [&](int axis) {
            Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(npts);
            const double w[] = {1.0 / 12, -2.0 / 3, 2.0 / 3, -1.0 / 12};
            const double off[] = {-2, -1, 1, 2};
            for (int k = 0; k < 4; ++k) {
                const Eigen::ArrayXd xs = axis == 0 ? Eigen::ArrayXd(X + off[k] * fd) : X;
                const Eigen::ArrayXd ys = axis == 1 ? Eigen::ArrayXd(Y + off[k] * fd) : Y;
                acc += w[k] * evaluate_potential(xs, ys, Z, frozen);
            }
            return Eigen::ArrayXd(acc / fd);
        };
        const Eigen::ArrayXd dux = gradient(0), duy = gradient(1);

        const double s = t / tf;
        const double action = tm.action(t);
        const cd ground_phase = std::polar(1.0, (action - tm.energy({0, 0, 0}) * t) / kHbar);
        for (int m = 0; m < nm; ++m) {
            const ModeIndex& n = modes[m];
            const auto& px = P[0][n.nx];
            const auto& py = P[1][n.ny];
            const auto& pz = P[2][n.nz];
            cd sd = 0, sx = 0, sy = 0;
            double ad = 0, ax = 0, ay = 0;
            idx = 0;
            for (int k = 0; k < count[2]; ++k)
                for (int j = 0; j < count[1]; ++j) {
                    const cd pyz = py[j] * pz[k];
                    for (int i = 0; i < count[0]; ++i, ++idx) {
                        const cd w = px[i] * pyz;
                        sd += w * delta[idx];
                        sx += w * dux[idx];
                        sy += w * duy[idx];
                        const double aw = std::abs(w);
                        ad += aw * std::abs(delta[idx]);
                        ax += aw * std::abs(dux[idx]);
                        ay += aw * std::abs(duy[idx]);
                    }
                }
            const cd mode_phase = std::polar(1.0, (action - tm.energy(n) * t) / kHbar);
            const cd ph = std::conj(mode_phase) * ground_phase * tw[it] / kHbar;
            g[m] += ph * sd;
            const double aph = std::abs(ph);
            ag[m] += aph * ad;
            for (int jb = 0; jb < 6; ++jb) {
                const double b = basis.value(jb, s);
                kv[m][jb] -= ph * b * sx;
                kv[m][6 + jb] -= ph * b * sy;
                ak[m][jb] += aph * std::abs(b) * ax;
                ak[m][6 + jb] += aph * std::abs(b) * ay;
            }
        }
    }
    std::vector<ModeContribution> out;
    for (int m = 0; m < nm; ++m) out.push_back({modes[m], g[m], kv[m]});
    if (l1) {
        l1->clear();
        for (int m = 0; m < nm; ++m) l1->push_back({modes[m], ag[m], ak[m].cast<cd>()});
    }
    return out;
}

}  // namespace dwol::verify
