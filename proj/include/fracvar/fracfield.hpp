#pragma once

#include <vector>

#include "fracvar/domain.hpp"
#include "fracvar/frac1d.hpp"
#include "fracvar/report.hpp"

namespace fracvar {

enum class FracKind { RL, Caputo };

/// One of the four partial fractional derivative families.
struct FracVecKind {
    FracKind kind;
    Direction direction;
};

/// Applies the 1D fractional operator along every grid line of `axis`.
SpatialField partial_frac(const SpatialField& field, int axis, FracOrder alpha,
                          FracVecKind kind, CaputoScheme scheme);

/// Componentwise stack of partial_frac over all axes.
std::vector<SpatialField> frac_gradient(const SpatialField& field, FracOrder alpha,
                                        FracVecKind kind, CaputoScheme scheme);

/// Sum over axes of the axis-aligned partial fractional derivatives.
SpatialField frac_divergence(const std::vector<SpatialField>& vfield, FracOrder alpha,
                             FracVecKind kind, CaputoScheme scheme);

enum class GradScheme { ForwardDiff, Centered };
enum class DivScheme { BackwardDiff, Centered };

/// Classical gradient. ForwardDiff sets the last node along each line to 0,
/// the exact adjoint convention for the backward-difference divergence.
std::vector<SpatialField> classical_grad(const SpatialField& field, GradScheme scheme);

SpatialField classical_div(const std::vector<SpatialField>& vfield, DivScheme scheme);

/// Componentwise product (gamma x v)_i = gamma_i v_i.
std::vector<SpatialField> componentwise_product(const std::vector<double>& gamma,
                                                const std::vector<SpatialField>& v);

/// Discrepancy of div^{1/2}(gamma x cgrad^{1/2} u) against gamma . grad u,
/// for both the L1 and GL discretizations.
CheckReport check_div_grad(const SpatialField& field, const std::vector<double>& gamma);

/// |int v . (backward Caputo gradient of u) - int (forward RL div v) u|.
/// Requires u dirichlet_zero; flagged singular faces are excluded from the
/// quadrature (u vanishes there).
CheckReport check_green_riemann(const SpatialField& u,
                                const std::vector<SpatialField>& v, FracOrder alpha);

}  // namespace fracvar
