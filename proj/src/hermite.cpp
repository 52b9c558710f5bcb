#include "dwol/hermite.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dwol/errors.hpp"

namespace dwol {

namespace {

constexpr int kTable = 41;
using cd = std::complex<double>;

struct Tables {
    std::array<double, kTable> fact{};
    std::array<double, kTable> gamma_half{};
    Tables() {
        fact[0] = 1;
        for (int i = 1; i < kTable; ++i) fact[i] = fact[i - 1] * i;
        gamma_half[0] = std::sqrt(std::numbers::pi);
        for (int i = 1; i < kTable; ++i) gamma_half[i] = gamma_half[i - 1] * (i - 0.5);
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

cd ipow(cd base, int e) {
    cd r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

void check_index(int n, const HermiteOptions& opt) {
    if (n < 0) throw InvalidParameters("negative Hermite index");
    if (n > opt.max_index || n + 4 >= kTable)
        throw IndexTooLarge("Hermite index " + std::to_string(n) + " exceeds the configured maximum " +
                            std::to_string(opt.max_index));
}

// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(cd v) {
        add_part(re_, cre_, v.real());
        add_part(im_, cim_, v.imag());
    }
    cd value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void add_part(double& sum, double& comp, double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

// int H_n(Y) exp(-Y^2) (sqrt2 l Y + lag)^p exp(-a (sqrt2 l Y + lag)^2 + i q (sqrt2 l Y + lag)) dY
cd exponential_term(int n, double l, double lag, int p, double a, double q) {
    const double s2l = std::sqrt(2.0) * l;
    const double P = 1 + 2 * a * l * l;
    const cd Q = s2l * cd(-2 * a * lag, q);
    const cd C = cd(-a * lag * lag, q * lag);
    const cd mu = Q / (2 * P);

    // H_n(Z + mu) in the Hermite basis of Z.
    std::vector<cd> h(n + p + 1, cd(0));
    for (int k = 0; k <= n; ++k) h[k] = binomial(n, k) * ipow(2.0 * mu, n - k);
    // Multiply p times by (alpha Z + beta) using Z H_k = H_{k+1}/2 + k H_{k-1}.
    const cd beta = s2l * mu + lag;
    for (int rep = 0; rep < p; ++rep) {
        std::vector<cd> next(h.size(), cd(0));
        for (std::size_t k = 0; k < h.size(); ++k) {
            if (h[k] == cd(0)) continue;
            next[k] += beta * h[k];
            if (k + 1 < h.size()) next[k + 1] += s2l * h[k] / 2.0;
            if (k >= 1) next[k - 1] += s2l * static_cast<double>(k) * h[k];
        }
        h = std::move(next);
    }
    // int H_{2j}(Z) exp(-P Z^2) dZ = 4^j Gamma(j+1/2) P^{-1/2} (1/P - 1)^j
    CompensatedSum sum;
    const double r = 1 / P - 1;
    for (std::size_t k = 0; k < h.size(); k += 2) {
        const int j = static_cast<int>(k / 2);
        sum.add(h[k] * (std::pow(4.0, j) * gamma_half(j) * std::pow(r, j)));
    }
    return std::exp(C + Q * Q / (4 * P)) * sum.value() / std::sqrt(P);
}

cd exponential_term_moments(int n, double l, double lag, int p, double a, double q) {
    const double s2l = std::sqrt(2.0) * l;
    const double P = 1 + 2 * a * l * l;
    const cd Q = s2l * cd(-2 * a * lag, q);
    const cd C = cd(-a * lag * lag, q * lag);
    const auto hc = hermite_monomial_coefficients(n);
    CompensatedSum sum;
    for (int m = 0; m <= n; ++m) {
        if (hc[m] == 0) continue;
        for (int j = 0; j <= p; ++j)
            sum.add(hc[m] * binomial(p, j) * std::pow(s2l, j) * std::pow(lag, p - j) * moment_sum(m + j, P, Q));
    }
    return std::exp(C + Q * Q / (4 * P)) * sum.value();
}

template <typename F>
cd combine_trig(const Factor1D& g, F&& term) {
    switch (g.trig) {
        case Trig::none: return term(0.0);
        case Trig::cos: return 0.5 * (term(g.k) + term(-g.k));
        case Trig::sin: return (term(g.k) - term(-g.k)) / cd(0, 2);
    }
    return 0;
}

}  // namespace

double factorial(int n) { return tables().fact.at(n); }

double gamma_half(int k) { return tables().gamma_half.at(k); }

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

double hermite(int n, double x) {
    if (n == 0) return 1;
    double h0 = 1, h1 = 2 * x;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2 * x * h1 - 2 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

std::vector<double> hermite_monomial_coefficients(int n) {
    // H_n(x) = sum_{k1 + 2 k2 = n} n! / (k1! k2!) (-1)^k2 (2x)^k1
    std::vector<double> c(n + 1, 0.0);
    for (int k2 = 0; 2 * k2 <= n; ++k2) {
        const int k1 = n - 2 * k2;
        c[k1] = factorial(n) / (factorial(k1) * factorial(k2)) * (k2 % 2 ? -1.0 : 1.0) * std::pow(2.0, k1);
    }
    return c;
}

std::complex<double> moment_sum(int k, double P, std::complex<double> Q) {
    CompensatedSum sum;
    const cd ratio = Q / (2 * P);
    for (int s = 0; 2 * s <= k; ++s)
        sum.add(binomial(k, 2 * s) * ipow(ratio, k - 2 * s) * (gamma_half(s) / std::pow(P, s + 0.5)));
    return sum.value();
}

std::complex<double> gaussian_moment(int k, double P, std::complex<double> Q) {
    return std::exp(Q * Q / (4 * P)) * moment_sum(k, P, Q);
}

std::complex<double> moment_pair(int k, double P, std::complex<double> Q, int sign) {
    return gaussian_moment(k, P, Q) + static_cast<double>(sign) * gaussian_moment(k, P, std::conj(Q));
}

double Factor1D::operator()(double u) const {
    double v = std::pow(u, power) * std::exp(-gauss * u * u);
    switch (trig) {
        case Trig::none: break;
        case Trig::cos: v *= std::cos(k * u); break;
        case Trig::sin: v *= std::sin(k * u); break;
    }
    return v;
}

std::vector<std::pair<double, Factor1D>> Factor1D::derivative() const {
    std::vector<std::pair<double, Factor1D>> out;
    if (power > 0) out.push_back({static_cast<double>(power), {power - 1, gauss, k, trig}});
    if (gauss != 0) out.push_back({-2 * gauss, {power + 1, gauss, k, trig}});
    if (trig == Trig::cos && k != 0) out.push_back({-k, {power, gauss, k, Trig::sin}});
    if (trig == Trig::sin && k != 0) out.push_back({k, {power, gauss, k, Trig::cos}});
    return out;
}

std::complex<double> hermite_factor_integral(int n, double l, double lag, const Factor1D& g,
                                             const HermiteOptions& opt) {
    check_index(n, opt);
    return combine_trig(g, [&](double q) { return exponential_term(n, l, lag, g.power, g.gauss, q); });
}

std::complex<double> hermite_factor_integral_moments(int n, double l, double lag, const Factor1D& g,
                                                     const HermiteOptions& opt) {
    check_index(n, opt);
    return combine_trig(g, [&](double q) { return exponential_term_moments(n, l, lag, g.power, g.gauss, q); });
}

std::vector<std::pair<double, Factor1D>> kind_factors(HermiteKind kind, const AxisFrame& f, const KindArgs& a) {
    const double x0 = 1 / (std::sqrt(2.0) * f.l);  // X_0 = u / (sqrt2 l)
    const double env = 1 / (a.waist * a.waist);
    switch (kind) {
        case HermiteKind::ID: return {{1.0, {0, 0, 2 * a.k, Trig::cos}}};
        case HermiteKind::IDS: return {{1.0, {0, 0, 2 * a.k, Trig::sin}}};
        case HermiteKind::ID2: return {{1.0, {0, 2 * env, 0, Trig::none}}};
        case HermiteKind::ID3: return {{1.0, {0, env, a.k, Trig::cos}}};
        case HermiteKind::ID3S: return {{1.0, {0, env, a.k, Trig::sin}}};
        case HermiteKind::ID4: return {{x0 * x0, {2, 0, 0, Trig::none}}};
        case HermiteKind::Ie: return {{x0, {1, 0, 0, Trig::none}}};
        case HermiteKind::ID2t: return {{x0, {1, 2 * env, 0, Trig::none}}};
        case HermiteKind::ID3t: return {{x0, {1, env, a.k, Trig::cos}}};
        case HermiteKind::ID3St: return {{x0, {1, env, a.k, Trig::sin}}};
        case HermiteKind::Iz:
            switch (a.z) {
                case ZTerm::one: return {{1.0, {}}};
                case ZTerm::cos: return {{1.0, {0, 0, a.k, Trig::cos}}};
                case ZTerm::cos_sq: return {{0.5, {}}, {0.5, {0, 0, 2 * a.k, Trig::cos}}};
                case ZTerm::quadratic: return {{x0 * x0, {2, 0, 0, Trig::none}}};
            }
    }
    return {};
}

std::complex<double> hermite_integral(HermiteKind kind, const AxisFrame& f, const KindArgs& a,
                                      const HermiteOptions& opt) {
    AxisFrame frame = f;
    if (kind == HermiteKind::Iz) frame.center = frame.shift = 0;
    cd total = 0;
    for (const auto& [w, g] : kind_factors(kind, frame, a))
        total += w * hermite_factor_integral(frame.n, frame.l, frame.center - frame.shift, g, opt);
    return total;
}

}  // namespace dwol
