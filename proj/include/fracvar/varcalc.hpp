#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fracvar/domain.hpp"
#include "fracvar/frac1d.hpp"
#include "fracvar/report.hpp"

namespace fracvar {

/// Generalized Lagrangian L(t,x,y,v,w,z) with closed-form slot derivatives.
/// dy,dv,dw,dz must be the exact partials of eval; see verify_lagrangian_partials.
struct Lagrangian {
    struct Args {
        double t;
        const std::vector<double>* x;
        double y;
        double v;
        const std::vector<double>* w;
        const std::vector<double>* z;
    };
    std::function<double(const Args&)> eval;
    std::function<double(const Args&)> dy;
    std::function<double(const Args&)> dv;
    std::function<std::vector<double>(const Args&)> dw;
    std::function<std::vector<double>(const Args&)> dz;
};

/// Central-difference verification of the Lagrangian slot derivatives on
/// random slot values; returns the max relative error.
double verify_lagrangian_partials(const Lagrangian& L, int dim, int trials,
                                  unsigned seed);

/// Doubled field U = (u_+, u_-) on one space-time grid.
struct AsymmetricState {
    SpaceTimeField u_plus;
    SpaceTimeField u_minus;

    AsymmetricState(SpaceTimeField up, SpaceTimeField um);
};

/// The argument tuple fields: y = u_+ + u_-, v = cD_+ u_+ - cD_- u_-,
/// w = cgrad u_+ - cgrad_bar u_-, z = grad u_+ + grad u_-.
struct SlotFields {
    SpaceTimeField y;
    SpaceTimeField v;
    std::vector<SpaceTimeField> w;
    std::vector<SpaceTimeField> z;
};

/// Quadrature rule in time implied by the scheme: GL pairs with the causal
/// rectangle rule (weight on t_1..t_n), L1 with trapezoid.
QuadRule rule_for(CaputoScheme scheme);

/// Matching rule in space. The rectangle pairing uses left endpoints in space:
/// with trapezoid weights the adjoint diffusion stencil loses consistency at
/// the rows next to the lo faces (the halved boundary weight leaks an O(1/h)
/// term), while the uniform-interior rectangle weights reproduce the standard
/// 3-point stencil at every interior row.
QuadRule space_rule_for(QuadRule time_rule);

SlotFields assemble_slots(const AsymmetricState& U, FracOrder alpha,
                          CaputoScheme scheme);

/// Discrete asymmetric fractional action.
double action(const Lagrangian& L, const AsymmetricState& U, FracOrder alpha,
              CaputoScheme scheme);
double action(const Lagrangian& L, const AsymmetricState& U, FracOrder alpha,
              CaputoScheme scheme, QuadRule rule);

/// First variation in direction H (pre-integration-by-parts form).
/// H components must be spacetime_zero.
double action_derivative(const Lagrangian& L, const AsymmetricState& U,
                         const AsymmetricState& H, FracOrder alpha,
                         CaputoScheme scheme);
double action_derivative(const Lagrangian& L, const AsymmetricState& U,
                         const AsymmetricState& H, FracOrder alpha,
                         CaputoScheme scheme, QuadRule rule);

/// The two Euler-Lagrange residual fields (plus-equation, minus-equation).
/// Outer operators are the discrete adjoints (kernel transposes) of the inner
/// operators, so that <residual, H> reproduces action_derivative exactly for
/// one-sided spacetime_zero directions. Values on the space boundary and at
/// t = a are 0.
std::pair<SpaceTimeField, SpaceTimeField> el_residual_pair(const Lagrangian& L,
                                                           const AsymmetricState& U,
                                                           FracOrder alpha,
                                                           CaputoScheme scheme);

/// Minus-equation at U = (u_plus, 0): the causal equation.
SpaceTimeField restricted_el_residual(const Lagrangian& L,
                                      const SpaceTimeField& u_plus, FracOrder alpha,
                                      CaputoScheme scheme);

/// Compares <residuals, H> against central finite differences of the action
/// over seeded pseudo-random spacetime_zero directions.
CheckReport gradient_check(const Lagrangian& L, const AsymmetricState& U,
                           FracOrder alpha, CaputoScheme scheme, int n_directions,
                           unsigned seed);

/// Weighted inner product sum(Q a b): `rule` in time, space_rule_for(rule)
/// in space.
double weighted_inner(const SpaceTimeField& a, const SpaceTimeField& b, QuadRule rule);

}  // namespace fracvar
