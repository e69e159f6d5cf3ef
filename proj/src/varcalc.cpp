#include "fracvar/varcalc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fracvar {

namespace {

using Series = std::vector<double>;
using SeriesOp = std::function<void(double h, const Series& x, Series& y)>;

void reflect(Series& v) { std::reverse(v.begin(), v.end()); }

// Applies a 1D operation to the time series of every space node.
SpaceTimeField apply_time(const SpaceTimeField& f, const SeriesOp& op) {
    SpaceTimeField out = SpaceTimeField::zeros(f.tgrid, f.domain);
    const int ns = f.nspace();
    const int nt = f.tgrid.n;
    const double h = f.tgrid.h();
    parallel_for(ns, [&](int p) {
        Series x(nt + 1), y;
        for (int j = 0; j <= nt; ++j) x[j] = f.at(j, p);
        op(h, x, y);
        for (int j = 0; j <= nt; ++j) out.at(j, p) = y[j];
    });
    return out;
}

// Applies a 1D operation along every grid line of `axis` in every time slice.
SpaceTimeField apply_space(const SpaceTimeField& f, int axis, const SeriesOp& op) {
    SpaceTimeField out = SpaceTimeField::zeros(f.tgrid, f.domain);
    const BoxDomain& d = f.domain;
    const double h = d.spacing(axis);
    std::vector<std::vector<int>> bases;
    for_each_line(d, axis, [&](const std::vector<int>& b) { bases.push_back(b); });
    const int nt = f.tgrid.n;
    const int nlines = static_cast<int>(bases.size());
    parallel_for((nt + 1) * nlines, [&](int task) {
        const int j = task / nlines;
        std::vector<int> idx = bases[task % nlines];
        Series x(d.nodes(axis)), y;
        for (int i = 0; i <= d.n[axis]; ++i) {
            idx[axis] = i;
            x[i] = f.at(j, d.flat_index(idx));
        }
        op(h, x, y);
        for (int i = 0; i <= d.n[axis]; ++i) {
            idx[axis] = i;
            out.at(j, d.flat_index(idx)) = y[i];
        }
    });
    return out;
}

// Inner operators (act on the varied fields).

SeriesOp caputo_fwd_op(double alpha, CaputoScheme scheme) {
    return [alpha, scheme](double h, const Series& x, Series& y) {
        if (scheme == CaputoScheme::L1) {
            l1_caputo_forward(alpha, h, x, y);
        } else {
            Series shifted(x.size());
            for (size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - x[0];
            gl_apply_forward(gl_weights(FracOrder(alpha), static_cast<int>(x.size()) - 1),
                             h, shifted, y);
        }
    };
}

SeriesOp caputo_bwd_op(double alpha, CaputoScheme scheme) {
    SeriesOp fwd = caputo_fwd_op(alpha, scheme);
    return [fwd](double h, const Series& x, Series& y) {
        Series xr(x.rbegin(), x.rend());
        fwd(h, xr, y);
        reflect(y);
    };
}

SeriesOp grad_fwd_op() {
    return [](double h, const Series& x, Series& y) {
        const int n = static_cast<int>(x.size()) - 1;
        y.assign(n + 1, 0.0);
        for (int i = 0; i < n; ++i) y[i] = (x[i + 1] - x[i]) / h;
    };
}

// Adjoint operators: y = (1/q) op^T (q x) with the 1D quadrature weights q.
// The fractional kernels are the pure (Toeplitz / L1) matrices; on the
// C^1_0 variation classes they coincide with the Caputo inner operators.

SeriesOp weighted_adjoint(const SeriesOp& transpose_op, QuadRule rule) {
    return [transpose_op, rule](double h, const Series& x, Series& y) {
        const int n = static_cast<int>(x.size()) - 1;
        const Series q = quad_weights(n, h, rule);
        Series xq(n + 1);
        for (int i = 0; i <= n; ++i) xq[i] = q[i] * x[i];
        transpose_op(h, xq, y);
        for (int i = 0; i <= n; ++i) y[i] = q[i] > 0.0 ? y[i] / q[i] : 0.0;
    };
}

SeriesOp fwd_kernel_transpose(double alpha, CaputoScheme scheme) {
    return [alpha, scheme](double h, const Series& x, Series& y) {
        if (scheme == CaputoScheme::L1) {
            l1_caputo_forward_transpose(alpha, h, x, y);
        } else {
            gl_apply_forward_transpose(
                gl_weights(FracOrder(alpha), static_cast<int>(x.size()) - 1), h, x, y);
        }
    };
}

SeriesOp bwd_kernel_transpose(double alpha, CaputoScheme scheme) {
    SeriesOp t = fwd_kernel_transpose(alpha, scheme);
    return [t](double h, const Series& x, Series& y) {
        Series xr(x.rbegin(), x.rend());
        t(h, xr, y);
        reflect(y);
    };
}

SeriesOp grad_fwd_transpose() {
    return [](double h, const Series& x, Series& y) {
        const int n = static_cast<int>(x.size()) - 1;
        y.assign(n + 1, 0.0);
        for (int k = 0; k <= n; ++k) {
            double acc = 0.0;
            if (k >= 1) acc += x[k - 1];
            if (k < n) acc -= x[k];
            y[k] = acc / h;
        }
    };
}

struct PartialFields {
    SpaceTimeField dy;
    SpaceTimeField dv;
    std::vector<SpaceTimeField> dw;
    std::vector<SpaceTimeField> dz;
};

PartialFields eval_partials(const Lagrangian& L, const SlotFields& s) {
    const TimeGrid& tg = s.y.tgrid;
    const BoxDomain& d = s.y.domain;
    const int dim = d.dim;
    PartialFields out{SpaceTimeField::zeros(tg, d), SpaceTimeField::zeros(tg, d), {}, {}};
    for (int i = 0; i < dim; ++i) {
        out.dw.push_back(SpaceTimeField::zeros(tg, d));
        out.dz.push_back(SpaceTimeField::zeros(tg, d));
    }
    const int ns = d.total_nodes();
    for (int j = 0; j <= tg.n; ++j) {
        const double t = tg.node(j);
        for (int p = 0; p < ns; ++p) {
            const auto x = d.point(d.multi_index(p));
            std::vector<double> w(dim), z(dim);
            for (int i = 0; i < dim; ++i) {
                w[i] = s.w[i].at(j, p);
                z[i] = s.z[i].at(j, p);
            }
            Lagrangian::Args a{t, &x, s.y.at(j, p), s.v.at(j, p), &w, &z};
            out.dy.at(j, p) = L.dy(a);
            out.dv.at(j, p) = L.dv(a);
            const auto dw = L.dw(a);
            const auto dz = L.dz(a);
            for (int i = 0; i < dim; ++i) {
                out.dw[i].at(j, p) = dw[i];
                out.dz[i].at(j, p) = dz[i];
            }
        }
    }
    return out;
}

SpaceTimeField lincomb(const SpaceTimeField& a, double ca, const SpaceTimeField& b,
                       double cb) {
    SpaceTimeField out = SpaceTimeField::zeros(a.tgrid, a.domain);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = ca * a.values[i] + cb * b.values[i];
    return out;
}

}  // namespace

double verify_lagrangian_partials(const Lagrangian& L, int dim, int trials,
                                  unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double eps = 1e-5;
    double max_rel = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const double t = 0.5 + 0.4 * uni(rng);
        std::vector<double> x(dim), w(dim), z(dim);
        for (auto& c : x) c = 0.5 + 0.4 * uni(rng);
        for (auto& c : w) c = uni(rng);
        for (auto& c : z) c = uni(rng);
        double y = uni(rng), v = uni(rng);
        auto args = [&] { return Lagrangian::Args{t, &x, y, v, &w, &z}; };

        auto check = [&](double analytic, double* slot) {
            const double orig = *slot;
            *slot = orig + eps;
            const double fp = L.eval(args());
            *slot = orig - eps;
            const double fm = L.eval(args());
            *slot = orig;
            const double fd = (fp - fm) / (2.0 * eps);
            const double denom = std::max({std::abs(fd), std::abs(analytic), 1.0});
            max_rel = std::max(max_rel, std::abs(fd - analytic) / denom);
        };
        check(L.dy(args()), &y);
        check(L.dv(args()), &v);
        const auto dw = L.dw(args());
        const auto dz = L.dz(args());
        for (int i = 0; i < dim; ++i) {
            check(dw[i], &w[i]);
            check(dz[i], &z[i]);
        }
    }
    return max_rel;
}

AsymmetricState::AsymmetricState(SpaceTimeField up, SpaceTimeField um)
    : u_plus(std::move(up)), u_minus(std::move(um)) {
    if (u_plus.tgrid.a != u_minus.tgrid.a || u_plus.tgrid.b != u_minus.tgrid.b ||
        u_plus.tgrid.n != u_minus.tgrid.n || !u_plus.domain.same_grid(u_minus.domain))
        throw std::invalid_argument("AsymmetricState: component grids differ");
}

QuadRule rule_for(CaputoScheme scheme) {
    return scheme == CaputoScheme::GL ? QuadRule::RightRectangle : QuadRule::Trapezoid;
}

QuadRule space_rule_for(QuadRule time_rule) {
    return time_rule == QuadRule::Trapezoid ? QuadRule::Trapezoid
                                            : QuadRule::LeftRectangle;
}

SlotFields assemble_slots(const AsymmetricState& U, FracOrder alpha,
                          CaputoScheme scheme) {
    const double a = alpha.alpha;
    const SpaceTimeField& up = U.u_plus;
    const SpaceTimeField& um = U.u_minus;
    const int dim = up.domain.dim;

    SlotFields s{lincomb(up, 1.0, um, 1.0),
                 lincomb(apply_time(up, caputo_fwd_op(a, scheme)), 1.0,
                         apply_time(um, caputo_bwd_op(a, scheme)), -1.0),
                 {}, {}};
    for (int i = 0; i < dim; ++i) {
        s.w.push_back(lincomb(apply_space(up, i, caputo_fwd_op(a, scheme)), 1.0,
                              apply_space(um, i, caputo_bwd_op(a, scheme)), -1.0));
        s.z.push_back(lincomb(apply_space(up, i, grad_fwd_op()), 1.0,
                              apply_space(um, i, grad_fwd_op()), 1.0));
    }
    return s;
}

double weighted_inner(const SpaceTimeField& a, const SpaceTimeField& b, QuadRule rule) {
    SpaceTimeField prod = SpaceTimeField::zeros(a.tgrid, a.domain);
    for (size_t i = 0; i < prod.values.size(); ++i)
        prod.values[i] = a.values[i] * b.values[i];
    return integrate(prod, rule, space_rule_for(rule));
}

double action(const Lagrangian& L, const AsymmetricState& U, FracOrder alpha,
              CaputoScheme scheme) {
    return action(L, U, alpha, scheme, rule_for(scheme));
}

double action(const Lagrangian& L, const AsymmetricState& U, FracOrder alpha,
              CaputoScheme scheme, QuadRule rule) {
    const SlotFields s = assemble_slots(U, alpha, scheme);
    const TimeGrid& tg = s.y.tgrid;
    const BoxDomain& d = s.y.domain;
    const int dim = d.dim;
    SpaceTimeField integrand = SpaceTimeField::zeros(tg, d);
    for (int j = 0; j <= tg.n; ++j) {
        const double t = tg.node(j);
        for (int p = 0; p < d.total_nodes(); ++p) {
            const auto x = d.point(d.multi_index(p));
            std::vector<double> w(dim), z(dim);
            for (int i = 0; i < dim; ++i) {
                w[i] = s.w[i].at(j, p);
                z[i] = s.z[i].at(j, p);
            }
            Lagrangian::Args a{t, &x, s.y.at(j, p), s.v.at(j, p), &w, &z};
            const double val = L.eval(a);
            if (!std::isfinite(val))
                throw std::runtime_error("action: non-finite integrand");
            integrand.at(j, p) = val;
        }
    }
    return integrate(integrand, rule, space_rule_for(rule));
}

double action_derivative(const Lagrangian& L, const AsymmetricState& U,
                         const AsymmetricState& H, FracOrder alpha,
                         CaputoScheme scheme) {
    return action_derivative(L, U, H, alpha, scheme, rule_for(scheme));
}

double action_derivative(const Lagrangian& L, const AsymmetricState& U,
                         const AsymmetricState& H, FracOrder alpha,
                         CaputoScheme scheme, QuadRule rule) {
    if (H.u_plus.boundary_class != BoundaryClass::SpacetimeZero ||
        H.u_minus.boundary_class != BoundaryClass::SpacetimeZero)
        throw std::invalid_argument(
            "action_derivative: H components must be spacetime_zero");
    const SlotFields s = assemble_slots(U, alpha, scheme);
    const SlotFields hs = assemble_slots(H, alpha, scheme);
    const PartialFields dL = eval_partials(L, s);

    double acc = 0.0;
    acc += weighted_inner(dL.dy, hs.y, rule);
    acc += weighted_inner(dL.dv, hs.v, rule);
    for (int i = 0; i < s.y.domain.dim; ++i) {
        acc += weighted_inner(dL.dw[i], hs.w[i], rule);
        acc += weighted_inner(dL.dz[i], hs.z[i], rule);
    }
    return acc;
}

std::pair<SpaceTimeField, SpaceTimeField> el_residual_pair(const Lagrangian& L,
                                                           const AsymmetricState& U,
                                                           FracOrder alpha,
                                                           CaputoScheme scheme) {
    const double a = alpha.alpha;
    const QuadRule rule = rule_for(scheme);
    const SlotFields s = assemble_slots(U, alpha, scheme);
    const PartialFields dL = eval_partials(L, s);
    const TimeGrid& tg = s.y.tgrid;
    const BoxDomain& d = s.y.domain;
    const int dim = d.dim;

    // time: adjoint of the forward (plus) / backward (minus) Caputo kernel
    auto mk_time = [&](bool forward_inner) {
        const SeriesOp t = forward_inner ? fwd_kernel_transpose(a, scheme)
                                         : bwd_kernel_transpose(a, scheme);
        return weighted_adjoint(t, rule);
    };
    SpaceTimeField time_plus = apply_time(dL.dv, mk_time(true));
    SpaceTimeField time_minus = apply_time(dL.dv, mk_time(false));

    SpaceTimeField rp = dL.dy;
    SpaceTimeField rm = dL.dy;
    for (size_t i = 0; i < rp.values.size(); ++i) {
        rp.values[i] += time_plus.values[i];
        rm.values[i] -= time_minus.values[i];
    }
    const QuadRule srule = space_rule_for(rule);
    for (int i = 0; i < dim; ++i) {
        SpaceTimeField wp = apply_space(
            dL.dw[i], i, weighted_adjoint(fwd_kernel_transpose(a, scheme), srule));
        SpaceTimeField wm = apply_space(
            dL.dw[i], i, weighted_adjoint(bwd_kernel_transpose(a, scheme), srule));
        SpaceTimeField zt = apply_space(
            dL.dz[i], i, weighted_adjoint(grad_fwd_transpose(), srule));
        for (size_t k = 0; k < rp.values.size(); ++k) {
            rp.values[k] += wp.values[k] + zt.values[k];
            rm.values[k] += -wm.values[k] + zt.values[k];
        }
    }

    // residuals live at t_1..t_n and space-interior nodes
    for (int j = 0; j <= tg.n; ++j)
        for (int p = 0; p < d.total_nodes(); ++p)
            if (j == 0 || d.is_boundary(d.multi_index(p))) {
                rp.at(j, p) = 0.0;
                rm.at(j, p) = 0.0;
            }
    return {std::move(rp), std::move(rm)};
}

SpaceTimeField restricted_el_residual(const Lagrangian& L,
                                      const SpaceTimeField& u_plus, FracOrder alpha,
                                      CaputoScheme scheme) {
    AsymmetricState U(u_plus, SpaceTimeField::zeros(u_plus.tgrid, u_plus.domain));
    return el_residual_pair(L, U, alpha, scheme).second;
}

CheckReport gradient_check(const Lagrangian& L, const AsymmetricState& U,
                           FracOrder alpha, CaputoScheme scheme, int n_directions,
                           unsigned seed) {
    if (n_directions < 1)
        throw std::invalid_argument("gradient_check: n_directions must be >= 1");
    const QuadRule rule = rule_for(scheme);
    const TimeGrid& tg = U.u_plus.tgrid;
    const BoxDomain& d = U.u_plus.domain;
    const auto [rp, rm] = el_residual_pair(L, U, alpha, scheme);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto random_direction = [&] {
        SpaceTimeField h = SpaceTimeField::zeros(tg, d);
        for (int j = 1; j < tg.n; ++j)
            for (int p = 0; p < d.total_nodes(); ++p) {
                const double val = uni(rng);
                if (!d.is_boundary(d.multi_index(p))) h.at(j, p) = val;
            }
        h.boundary_class = BoundaryClass::SpacetimeZero;
        return h;
    };

    // fourth-order central stencil: exact through quartic actions, so for the
    // quadratic Lagrangians this certifies eps can stay large (power of two,
    // no representation error) and the measured error is pure roundoff
    const double eps = 0.0625;
    double max_rel = 0.0, max_abs = 0.0;
    for (int k = 0; k < n_directions; ++k) {
        AsymmetricState H(random_direction(), random_direction());
        const double lhs = weighted_inner(rp, H.u_plus, rule) +
                           weighted_inner(rm, H.u_minus, rule);
        auto shifted = [&](double s) {
            AsymmetricState Us(lincomb(U.u_plus, 1.0, H.u_plus, s),
                               lincomb(U.u_minus, 1.0, H.u_minus, s));
            return action(L, Us, alpha, scheme, rule);
        };
        const double fd = (8.0 * (shifted(eps) - shifted(-eps)) -
                           (shifted(2.0 * eps) - shifted(-2.0 * eps))) /
                          (12.0 * eps);
        const double abs_err = std::abs(lhs - fd);
        const double denom = std::max({std::abs(lhs), std::abs(fd), 1e-12});
        max_abs = std::max(max_abs, abs_err);
        max_rel = std::max(max_rel, abs_err / denom);
    }

    CheckReport rep;
    rep.name = "gradient_check";
    rep.grid_sizes = {tg.n};
    for (int i = 0; i < d.dim; ++i) rep.grid_sizes.push_back(d.n[i]);
    rep.metrics["max_rel_err"] = max_rel;
    rep.metrics["max_abs_err"] = max_abs;
    rep.metrics["seed"] = static_cast<double>(seed);
    rep.metrics["n_directions"] = static_cast<double>(n_directions);
    rep.pass = std::isfinite(max_rel);
    return rep;
}

}  // namespace fracvar
