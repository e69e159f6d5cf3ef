#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracvar/domain.hpp"
#include "fracvar/report.hpp"
#include "fracvar/varcalc.hpp"

namespace fracvar {

/// Constant coefficients of u_t + gamma.grad u - div(K grad u) + beta u = f.
struct CDCoefficients {
    std::vector<double> gamma;                  // convection velocity
    std::vector<std::vector<double>> K;         // diffusivity, SPD (or exactly zero)
    double beta;                                // reaction rate, >= 0
    std::function<double(double, const std::vector<double>&)> source;
    std::function<double(const std::vector<double>&)> u0;

    /// Throws unless K is symmetric and positive definite (the zero matrix is
    /// accepted as the degenerate pure-time case), beta >= 0, sizes match.
    void validate(int dim) const;
};

struct SolveResult {
    SpaceTimeField u;
    std::string scheme;
    int factorizations = 0;
    double final_linear_residual = 0.0;
};

/// The extended Lagrangian L = f y - beta y^2/2 + v^2/2 + (gamma x w).w/2 - (K z).z/2.
Lagrangian cd_lagrangian(const CDCoefficients& c, int dim);

enum class TimeDerivScheme { Backward, Central };

/// Finite-difference residual u_t + gamma.grad u - div(K grad u) + beta u - f
/// on interior nodes (centered in space).
SpaceTimeField cd_classical_residual(const SpaceTimeField& u, const CDCoefficients& c,
                                     TimeDerivScheme tscheme = TimeDerivScheme::Backward);

/// Time-marching solver for restricted_el_residual(cd_lagrangian(c), u) = 0
/// with u(a,.) = u0 and u = 0 on the space boundary. GL scheme only: the
/// causal structure of the GL kernel is what makes the march well posed.
SolveResult variational_solve(const CDCoefficients& c, const TimeGrid& tgrid,
                              const BoxDomain& domain, FracOrder alpha = FracOrder(0.5),
                              CaputoScheme scheme = CaputoScheme::GL);

enum class ConvectionScheme { Upwind, Centered };

/// Classical theta-scheme reference solver (theta = 1 implicit Euler,
/// theta = 1/2 Crank-Nicolson).
SolveResult reference_solve(const CDCoefficients& c, const TimeGrid& tgrid,
                            const BoxDomain& domain, double theta = 1.0,
                            ConvectionScheme convection = ConvectionScheme::Upwind);

/// A registered test problem with a known exact solution.
struct ManufacturedCase {
    std::string id;
    CDCoefficients coeffs;
    std::function<double(double, const std::vector<double>&)> exact;  // null if unknown
    TimeGrid default_tgrid;
    BoxDomain default_domain;
};

/// Trend certification of the equivalence theorem: (a) the classical residual
/// of the variational solution and (b) the restricted EL residual of the exact
/// solution both shrink under combined grid refinement.
CheckReport equivalence_check(const ManufacturedCase& mcase,
                              const std::vector<int>& levels);

struct ConvergenceLevel {
    int n;
    double h;
    double dt;
    double err_l2;
    double err_linf;
};

struct ConvergenceReport {
    std::string case_id;
    std::string solver;
    std::vector<ConvergenceLevel> levels;
    std::vector<double> observed_orders;  // log2 ratios of consecutive L2 errors
    bool exact_on_grid = false;           // all errors at roundoff scale
    bool pass = false;
};

enum class SolverChoice { Variational, Reference };

ConvergenceReport convergence_study(const ManufacturedCase& mcase,
                                    const std::vector<int>& levels,
                                    SolverChoice solver = SolverChoice::Variational,
                                    double theta = 1.0);

/// Space-time norms of (u - exact) sampled nodally.
double error_l2(const SpaceTimeField& u,
                const std::function<double(double, const std::vector<double>&)>& exact);
double error_linf(const SpaceTimeField& u,
                  const std::function<double(double, const std::vector<double>&)>& exact);

}  // namespace fracvar
