#include "dwol/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "dwol/errors.hpp"

namespace dwol {

namespace {

// Kronrod nodes (non-negative half) and weights; odd indices are the Gauss points.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    Eigen::VectorXcd value;
    Eigen::VectorXd error;
};

Panel evaluate(const VectorIntegrand& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Eigen::VectorXcd fc = f(c);
    Eigen::VectorXcd kron = kKronrod[7] * fc;
    Eigen::VectorXcd gauss = kGauss[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const Eigen::VectorXcd sum = f(c - h * kNodes[j]) + f(c + h * kNodes[j]);
        kron += kKronrod[j] * sum;
        if (j % 2 == 1) gauss += kGauss[j / 2] * sum;
    }
    evals += 15;
    Panel p{a, b, h * kron, Eigen::VectorXd()};
    p.error = (h * (kron - gauss)).cwiseAbs();
    return p;
}

}  // namespace

QuadratureResult integrate_gk(const VectorIntegrand& f, double a, double b, const QuadratureOptions& opt) {
    QuadratureResult res;
    std::vector<Panel> panels;
    const int n0 = std::max(1, opt.initial_panels);
    for (int i = 0; i < n0; ++i)
        panels.push_back(evaluate(f, a + (b - a) * i / n0, a + (b - a) * (i + 1) / n0, res.evaluations));

    while (true) {
        Eigen::VectorXcd total = Eigen::VectorXcd::Zero(panels.front().value.size());
        Eigen::VectorXd err = Eigen::VectorXd::Zero(total.size());
        for (const auto& p : panels) {
            total += p.value;
            err += p.error;
        }
        const double scale = total.cwiseAbs().maxCoeff();
        const Eigen::VectorXd allowed =
            (opt.rel_tol * total.cwiseAbs().cwiseMax(opt.floor * scale)).cwiseMax(opt.abs_tol);
        res.value = total;
        res.error = err;
        res.panels = static_cast<int>(panels.size());
        if ((err.array() <= allowed.array()).all()) return res;
        if (static_cast<int>(panels.size()) >= opt.max_panels)
            throw QuadratureFailure("adaptive quadrature reached " + std::to_string(panels.size()) +
                                    " panels without meeting the tolerance");

        std::vector<double> badness(panels.size());
        for (std::size_t i = 0; i < panels.size(); ++i)
            badness[i] = (panels[i].error.array() / allowed.array()).maxCoeff();
        const double worst = *std::max_element(badness.begin(), badness.end());
        std::vector<Panel> next;
        next.reserve(panels.size() * 2);
        for (std::size_t i = 0; i < panels.size(); ++i) {
            if (badness[i] >= 0.25 * worst && static_cast<int>(panels.size() + next.size()) < 2 * opt.max_panels) {
                const double m = 0.5 * (panels[i].a + panels[i].b);
                next.push_back(evaluate(f, panels[i].a, m, res.evaluations));
                next.push_back(evaluate(f, m, panels[i].b, res.evaluations));
            } else {
                next.push_back(std::move(panels[i]));
            }
        }
        panels = std::move(next);
    }
}

}  // namespace dwol
