#pragma once

#include <string>
#include <vector>

#include "fracvar/report.hpp"

namespace fracvar {

/// Fractional order restricted to (0,1); everything downstream assumes p = 1.
struct FracOrder {
    double alpha;

    explicit FracOrder(double a);
};

/// Uniform grid on [a,b] with n intervals, nodes t_j = a + j*h.
struct TimeGrid {
    double a;
    double b;
    int n;

    TimeGrid(double a_, double b_, int n_);

    double h() const { return (b - a) / n; }
    double node(int j) const { return a + j * h(); }
    int num_nodes() const { return n + 1; }
};

/// Uniform samples of a scalar function on [a,b].
struct Samples1D {
    TimeGrid grid;
    std::vector<double> values;

    Samples1D(TimeGrid g, std::vector<double> v);

    /// Sample a callable at the grid nodes.
    template <class F>
    static Samples1D sample(TimeGrid g, F&& f) {
        std::vector<double> v(g.num_nodes());
        for (int j = 0; j <= g.n; ++j) v[j] = f(g.node(j));
        return Samples1D(g, std::move(v));
    }
};

/// Grunwald-Letnikov convolution weights w_k = w_{k-1}*(k-1-alpha)/k, w_0 = 1.
struct GLWeights {
    double alpha;
    std::vector<double> w;
};

enum class Direction { Forward, Backward };
enum class CaputoScheme { L1, GL };
enum class RLScheme { L1PlusBoundary, GL };

/// Gamma function for x > 0 (Lanczos, g = 7, 9 coefficients).
double gamma_fn(double x);

GLWeights gl_weights(FracOrder alpha, int n);

/// Riemann-Liouville fractional integral I^beta, piecewise-linear-in-f with
/// the kernel integrated in closed form per cell.
Samples1D rl_integral(const Samples1D& f, double beta, Direction dir);

/// Caputo derivative of order alpha. L1: difference quotients against exact
/// kernel integrals. GL: Grunwald-Letnikov convolution of f - f(origin).
/// The value at the originating endpoint is 0.
Samples1D caputo_deriv(const Samples1D& f, FracOrder alpha, Direction dir,
                       CaputoScheme scheme);

/// Riemann-Liouville derivative. L1PlusBoundary evaluates the Caputo part
/// and adds (t-a)^{-alpha}/Gamma(1-alpha)*f(a); the originating endpoint is
/// flagged +inf when f does not vanish there. GL is the direct convolution.
Samples1D rl_deriv(const Samples1D& f, FracOrder alpha, Direction dir,
                   RLScheme scheme);

/// Exact Caputo/RL derivative of (t-a)^mu.
double power_rule_oracle(double mu, FracOrder alpha, double t, double a);

enum class CompositionVariant { CaputoCaputo, RLCaputo, RieweMixed };

/// Sup-norm distance between a composed pair of half-derivatives of f and
/// the central-difference f' on interior nodes. RieweMixed composes the
/// backward RL with the forward Caputo and is expected large.
CheckReport check_composition(const Samples1D& f, CompositionVariant variant);

enum class IbpVariant { CaputoCaputo, RLCaputo };

/// Integration-by-parts residual |int (D_+^a f) g - int f (cD_-^a g)|,
/// trapezoid quadrature. Requires g(a) = g(b) = 0.
CheckReport check_ibp(const Samples1D& f, const Samples1D& g, FracOrder alpha,
                      IbpVariant variant);

// Low-level kernels shared with the field and variational modules. All act
// on raw value arrays over a uniform grid with spacing h.

/// y = h^{-alpha} * toeplitz(w) x (forward GL, lower triangular).
void gl_apply_forward(const GLWeights& w, double h, const std::vector<double>& x,
                      std::vector<double>& y);
/// Transpose of gl_apply_forward.
void gl_apply_forward_transpose(const GLWeights& w, double h,
                                const std::vector<double>& x, std::vector<double>& y);

/// Forward L1 Caputo applied to raw values (row 0 is zero).
void l1_caputo_forward(double alpha, double h, const std::vector<double>& x,
                       std::vector<double>& y);
/// Transpose of l1_caputo_forward.
void l1_caputo_forward_transpose(double alpha, double h, const std::vector<double>& x,
                                 std::vector<double>& y);

}  // namespace fracvar
