#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dwol/hermite.hpp"
#include "dwol/lattice.hpp"
#include "dwol/polynomial.hpp"
#include "dwol/quadrature.hpp"
#include "dwol/trajectory.hpp"

namespace dwol {

struct ModeIndex {
    int nx = 0, ny = 0, nz = 0;
    int total() const { return nx + ny + nz; }
    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

// All modes with 1 <= nx + ny + nz <= cutoff; planar restricts to nz = 0.
std::vector<ModeIndex> enumerate_modes(int cutoff, bool planar = false);

// Orthonormal 1D oscillator eigenfunction with zero-point length l, centered at 0.
double oscillator_mode(int n, double l, double xi);

// Transport modes of the driven harmonic model along an STA trajectory.
class TransportModes {
public:
    TransportModes(const HarmonicModel& h, const Trajectory& sta);

    Eigen::Vector3d center(double t) const;
    Eigen::Vector3d center_velocity(double t) const;
    double energy(const ModeIndex& n) const;
    // Sum of the classical actions of the two in-plane axes.
    double action(double t) const;
    std::complex<double> operator()(const ModeIndex& n, double t, const Eigen::Vector3d& r) const;

private:
    HarmonicModel h_;
    Trajectory traj_;
    std::array<Polynomial, 2> qc_;
    std::array<Polynomial, 2> action_;
};

std::complex<double> transport_mode(const ModeIndex& n, const HarmonicModel& h, const Trajectory& sta, double t,
                                    const Eigen::Vector3d& r);

enum class BasisPolicy { exact15, least_squares11 };

// Cardinal correction polynomials f_j(s), j = 0..5, in s = t / t_f: f_j(k/7) = delta_{j,k-1},
// f_j and its first four derivatives vanish at s = 0 and s = 1 (exactly for exact15).
struct CorrectionBasis {
    BasisPolicy policy = BasisPolicy::exact15;
    int degree = 15;
    std::array<Polynomial, 6> basis;
    double condition_number = 0.0;

    double value(int j, double s) const;
    double derivative(int j, int order, double s) const;

private:
    friend CorrectionBasis correction_basis(BasisPolicy);
    std::array<Polynomial, 6> reduced_;  // exact15: f_j = s^5 (1 - s)^5 g_j
};

CorrectionBasis correction_basis(BasisPolicy policy = BasisPolicy::exact15);

// Product of 1D factors in (x - q0x, y - q0y, z).
struct SeparableTerm {
    double coef = 0.0;
    std::array<Factor1D, 3> f;
};

// U_D with waists frozen at w0, as a sum of separable terms in the shifted coordinates.
std::vector<SeparableTerm> potential_expansion(const LatticeParams& p);
// V_D in the same coordinates.
std::vector<SeparableTerm> harmonic_expansion(const HarmonicModel& h);
double evaluate_expansion(const std::vector<SeparableTerm>& terms, const Eigen::Vector3d& u);

struct EstaOptions {
    int cutoff = 2;
    bool planar = false;
    BasisPolicy basis = BasisPolicy::exact15;
    QuadratureOptions quad;
    HermiteOptions hermite;
};

struct ModeContribution {
    ModeIndex n;
    std::complex<double> g;
    Eigen::VectorXcd k;  // 12 components: x knots then y knots
};

struct EstaCorrection {
    Eigen::VectorXd epsilon = Eigen::VectorXd::Zero(12);
    std::vector<ModeContribution> modes;
    int cutoff = 0;
    double fidelity_estimate = 1.0;
    bool degenerate = false;
    std::string diagnostic;
    int quadrature_panels = 0;
};

// G_n and K_n for every requested mode, sharing one adaptive time quadrature.
std::vector<ModeContribution> auxiliary_functions(const std::vector<ModeIndex>& modes, const Trajectory& sta,
                                                  const LatticeParams& p, const HarmonicModel& h,
                                                  const CorrectionBasis& basis, const EstaOptions& opt,
                                                  int* panels = nullptr);

std::complex<double> g_n(const ModeIndex& n, const Trajectory& sta, const LatticeParams& p, const HarmonicModel& h,
                         const EstaOptions& opt = {});
Eigen::VectorXcd k_n(const ModeIndex& n, const Trajectory& sta, const CorrectionBasis& basis,
                     const LatticeParams& p, const HarmonicModel& h, const EstaOptions& opt = {});

// epsilon = -(sum |G|^2) sum Re(G* K) / |sum Re(G* K)|^2 with the zero conventions.
EstaCorrection correction_from_modes(std::vector<ModeContribution> modes, int cutoff);

EstaCorrection esta_correction(const Trajectory& sta, const LatticeParams& p, const HarmonicModel& h,
                               const EstaOptions& opt = {});

Trajectory apply_correction(const Trajectory& sta, const Eigen::VectorXd& epsilon, const CorrectionBasis& basis);

Trajectory design_esta(const TransportSpec& spec, const LatticeParams& p, const HarmonicModel& h,
                       const EstaOptions& opt = {}, EstaCorrection* report = nullptr);

}  // namespace dwol
