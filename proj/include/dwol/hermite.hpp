#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace dwol {

struct HermiteOptions {
    int max_index = 8;
};

// Physicists' Hermite polynomial by three-term recurrence.
double hermite(int n, double x);

// Coefficients of H_n in the monomial basis (Faa di Bruno form).
std::vector<double> hermite_monomial_coefficients(int n);

// Gamma(k + 1/2) by recurrence from sqrt(pi).
double gamma_half(int k);
double factorial(int n);
double binomial(int n, int k);

enum class Trig { none, cos, sin };

// g(u) = u^power * exp(-gauss * u^2) * trig(k * u)
struct Factor1D {
    int power = 0;
    double gauss = 0.0;
    double k = 0.0;
    Trig trig = Trig::none;

    double operator()(double u) const;
    // dg/du as a weighted sum of factors.
    std::vector<std::pair<double, Factor1D>> derivative() const;
};

// int H_n(Y) exp(-Y^2) g(sqrt(2) l Y + lag) dY over the real line.
std::complex<double> hermite_factor_integral(int n, double l, double lag, const Factor1D& g,
                                             const HermiteOptions& opt = {});

// Same integral through the monomial expansion of H_n and Gaussian moments.
std::complex<double> hermite_factor_integral_moments(int n, double l, double lag, const Factor1D& g,
                                                     const HermiteOptions& opt = {});

// D~: sum_s C(k,2s) (Q/2P)^(k-2s) Gamma(s+1/2) / P^(s+1/2); the moment int x^k exp(-P x^2 + Q x) dx
// equals exp(Q^2/4P) times this sum.
std::complex<double> moment_sum(int k, double P, std::complex<double> Q);
std::complex<double> gaussian_moment(int k, double P, std::complex<double> Q);
// D~^2_pm: moment with Q plus/minus the moment with conj(Q).
std::complex<double> moment_pair(int k, double P, std::complex<double> Q, int sign);

// Named integral kinds. Coordinates follow the mode frame: X = x / (sqrt(2) l),
// X_C = (x - center) / (sqrt(2) l), X_0 = (x - shift) / (sqrt(2) l), u = x - shift.
// Every kind is int H_n(X_C) exp(-X_C^2) w(X) dX with w:
//   ID    cos(2 k u)                    IDS    sin(2 k u)
//   ID2   exp(-2 u^2 / w^2)             ID2t   X_0 exp(-2 u^2 / w^2)
//   ID3   cos(k u) exp(-u^2 / w^2)      ID3t   X_0 cos(k u) exp(-u^2 / w^2)
//   ID3S  sin(k u) exp(-u^2 / w^2)      ID3St  X_0 sin(k u) exp(-u^2 / w^2)
//   ID4   X_0^2                         Ie     X_0
//   Iz    1, cos(k z), cos^2(k z) or Z^2 on the out-of-plane axis (center = shift = 0)
enum class HermiteKind { Iz, ID, IDS, ID2, ID3, ID3S, ID4, Ie, ID2t, ID3t, ID3St };
enum class ZTerm { one, cos, cos_sq, quadratic };

struct AxisFrame {
    int n = 0;
    double l = 1.0;
    double center = 0.0;
    double shift = 0.0;
};

struct KindArgs {
    double k = 0.0;
    double waist = 1.0;
    ZTerm z = ZTerm::one;
};

// Weighted factor decomposition of a kind's weight in the variable u.
std::vector<std::pair<double, Factor1D>> kind_factors(HermiteKind kind, const AxisFrame& f, const KindArgs& a);

std::complex<double> hermite_integral(HermiteKind kind, const AxisFrame& f, const KindArgs& a,
                                      const HermiteOptions& opt = {});

}  // namespace dwol
