#pragma once

#include <algorithm>

#include <Eigen/Core>

namespace dwol {

// Polynomial on s in [0, 1] stored by its Bernstein coefficients. Endpoint values and derivatives
// depend only on the outermost coefficients, so structural zeros there stay exact.
class Polynomial {
public:
    Polynomial() : c_(Eigen::VectorXd::Zero(1)) {}

    static Polynomial bernstein(Eigen::VectorXd coeffs) {
        Polynomial p;
        if (coeffs.size() > 0) p.c_ = std::move(coeffs);
        return p;
    }
    static Polynomial constant(double v) { return bernstein(Eigen::VectorXd::Constant(1, v)); }
    // From coefficients in increasing powers of s.
    static Polynomial monomial(const Eigen::VectorXd& a) {
        const Eigen::Index n = std::max<Eigen::Index>(a.size(), 1) - 1;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
        for (Eigen::Index k = 0; k <= n; ++k)
            for (Eigen::Index i = 0; i <= k && i < a.size(); ++i) b[k] += choose(k, i) / choose(n, i) * a[i];
        return bernstein(b);
    }

    const Eigen::VectorXd& coefficients() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Eigen::VectorXd monomial_coefficients() const {
        const Eigen::Index n = degree();
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
        for (Eigen::Index i = 0; i <= n; ++i) {
            double acc = 0;
            for (Eigen::Index k = 0; k <= i; ++k) acc += ((i - k) % 2 ? -1.0 : 1.0) * choose(i, k) * c_[k];
            a[i] = choose(n, i) * acc;
        }
        return a;
    }

    // de Casteljau evaluation.
    double operator()(double s) const {
        Eigen::VectorXd b = c_;
        for (Eigen::Index r = 1; r < b.size(); ++r)
            for (Eigen::Index i = 0; i < b.size() - r; ++i) b[i] = (1 - s) * b[i] + s * b[i + 1];
        return b[0];
    }

    Polynomial derivative(int order = 1) const {
        Eigen::VectorXd d = c_;
        for (int k = 0; k < order; ++k) {
            if (d.size() <= 1) return Polynomial();
            const double n = static_cast<double>(d.size() - 1);
            Eigen::VectorXd next(d.size() - 1);
            for (Eigen::Index i = 0; i + 1 < d.size(); ++i) next[i] = n * (d[i + 1] - d[i]);
            d = next;
        }
        return bernstein(d);
    }

    // Antiderivative vanishing at s = 0.
    Polynomial integral() const {
        const double n1 = static_cast<double>(c_.size());
        Eigen::VectorXd d = Eigen::VectorXd::Zero(c_.size() + 1);
        for (Eigen::Index i = 0; i < c_.size(); ++i) d[i + 1] = d[i] + c_[i] / n1;
        return bernstein(d);
    }

    // Same polynomial expressed at a higher degree.
    Polynomial elevated(int target) const {
        if (c_.size() == 1) return bernstein(Eigen::VectorXd::Constant(std::max(target, 0) + 1, c_[0]));
        Eigen::VectorXd d = c_;
        while (d.size() - 1 < target) {
            const Eigen::Index n1 = d.size();
            Eigen::VectorXd next(n1 + 1);
            next[0] = d[0];
            next[n1] = d[n1 - 1];
            for (Eigen::Index i = 1; i < n1; ++i) {
                const double w = static_cast<double>(i) / static_cast<double>(n1);
                next[i] = w * d[i - 1] + (1 - w) * d[i];
            }
            d = next;
        }
        return bernstein(d);
    }

    Polynomial& operator+=(const Polynomial& o) {
        const int n = std::max(degree(), o.degree());
        c_ = elevated(n).c_ + o.elevated(n).c_;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a += b * -1.0; }
    friend Polynomial operator*(const Polynomial& a, double s) { return bernstein(Eigen::VectorXd(a.c_ * s)); }
    friend Polynomial operator*(double s, const Polynomial& a) { return a * s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        const Eigen::Index m = a.degree(), n = b.degree();
        Eigen::VectorXd d = Eigen::VectorXd::Zero(m + n + 1);
        for (Eigen::Index i = 0; i <= m; ++i)
            for (Eigen::Index j = 0; j <= n; ++j)
                d[i + j] += choose(m, i) * choose(n, j) / choose(m + n, i + j) * a.c_[i] * b.c_[j];
        return bernstein(d);
    }

    static double choose(Eigen::Index n, Eigen::Index k) {
        if (k < 0 || k > n) return 0;
        k = std::min(k, n - k);
        double r = 1;
        for (Eigen::Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
        return r;
    }

private:
    Eigen::VectorXd c_;
};

}  // namespace dwol
