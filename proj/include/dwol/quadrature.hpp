#pragma once

#include <functional>

#include <Eigen/Core>

namespace dwol {

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    // Components smaller than floor * max|I| are held to the floored relative target.
    double floor = 1e-6;
    int max_panels = 1 << 15;
    int initial_panels = 1;
};

struct QuadratureResult {
    Eigen::VectorXcd value;
    Eigen::VectorXd error;
    int panels = 0;
    long evaluations = 0;
};

using VectorIntegrand = std::function<Eigen::VectorXcd(double)>;

// Globally adaptive Gauss-Kronrod (7, 15) for vector-valued integrands.
// Throws QuadratureFailure when the panel cap is reached.
QuadratureResult integrate_gk(const VectorIntegrand& f, double a, double b, const QuadratureOptions& opt = {});

}  // namespace dwol
