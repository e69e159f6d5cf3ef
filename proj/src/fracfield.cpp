#include "fracvar/fracfield.hpp"

#include <cmath>
#include <stdexcept>

namespace fracvar {

namespace {

using LineOp = std::function<std::vector<double>(const TimeGrid&, const std::vector<double>&)>;

SpatialField apply_along_lines(const SpatialField& field, int axis, const LineOp& op) {
    const BoxDomain& d = field.domain;
    if (axis < 0 || axis >= d.dim)
        throw std::invalid_argument("partial derivative: bad axis");
    std::vector<std::vector<int>> bases;
    for_each_line(d, axis, [&](const std::vector<int>& b) { bases.push_back(b); });

    std::vector<double> out(d.total_nodes(), 0.0);
    const TimeGrid g(d.lo[axis], d.hi[axis], d.n[axis]);
    parallel_for(static_cast<int>(bases.size()), [&](int li) {
        std::vector<int> idx = bases[li];
        std::vector<double> line(d.nodes(axis));
        for (int i = 0; i <= d.n[axis]; ++i) {
            idx[axis] = i;
            line[i] = field.values[d.flat_index(idx)];
        }
        const std::vector<double> res = op(g, line);
        for (int i = 0; i <= d.n[axis]; ++i) {
            idx[axis] = i;
            out[d.flat_index(idx)] = res[i];
        }
    });
    return SpatialField(d, std::move(out), false);
}

std::vector<double> grad_line(const std::vector<double>& x, double h, GradScheme s) {
    const int n = static_cast<int>(x.size()) - 1;
    std::vector<double> y(n + 1, 0.0);
    if (s == GradScheme::ForwardDiff) {
        for (int i = 0; i < n; ++i) y[i] = (x[i + 1] - x[i]) / h;
        y[n] = 0.0;
    } else {
        y[0] = (x[1] - x[0]) / h;
        for (int i = 1; i < n; ++i) y[i] = (x[i + 1] - x[i - 1]) / (2.0 * h);
        y[n] = (x[n] - x[n - 1]) / h;
    }
    return y;
}

std::vector<double> div_line(const std::vector<double>& x, double h, DivScheme s) {
    const int n = static_cast<int>(x.size()) - 1;
    std::vector<double> y(n + 1, 0.0);
    if (s == DivScheme::BackwardDiff) {
        y[0] = (x[1] - x[0]) / h;
        for (int i = 1; i <= n; ++i) y[i] = (x[i] - x[i - 1]) / h;
    } else {
        y[0] = (x[1] - x[0]) / h;
        for (int i = 1; i < n; ++i) y[i] = (x[i + 1] - x[i - 1]) / (2.0 * h);
        y[n] = (x[n] - x[n - 1]) / h;
    }
    return y;
}

}  // namespace

SpatialField partial_frac(const SpatialField& field, int axis, FracOrder alpha,
                          FracVecKind kind, CaputoScheme scheme) {
    return apply_along_lines(field, axis, [&](const TimeGrid& g, const std::vector<double>& x) {
        Samples1D s(g, x);
        if (kind.kind == FracKind::Caputo)
            return caputo_deriv(s, alpha, kind.direction, scheme).values;
        const RLScheme rs =
            scheme == CaputoScheme::GL ? RLScheme::GL : RLScheme::L1PlusBoundary;
        return rl_deriv(s, alpha, kind.direction, rs).values;
    });
}

std::vector<SpatialField> frac_gradient(const SpatialField& field, FracOrder alpha,
                                        FracVecKind kind, CaputoScheme scheme) {
    std::vector<SpatialField> out;
    out.reserve(field.domain.dim);
    for (int i = 0; i < field.domain.dim; ++i)
        out.push_back(partial_frac(field, i, alpha, kind, scheme));
    return out;
}

SpatialField frac_divergence(const std::vector<SpatialField>& vfield, FracOrder alpha,
                             FracVecKind kind, CaputoScheme scheme) {
    if (vfield.empty()) throw std::invalid_argument("frac_divergence: empty field");
    const BoxDomain& d = vfield[0].domain;
    if (static_cast<int>(vfield.size()) != d.dim)
        throw std::invalid_argument("frac_divergence: needs d components");
    SpatialField acc = SpatialField::zeros(d);
    for (int i = 0; i < d.dim; ++i) {
        if (!vfield[i].domain.same_grid(d))
            throw std::invalid_argument("frac_divergence: component grid mismatch");
        SpatialField di = partial_frac(vfield[i], i, alpha, kind, scheme);
        for (int p = 0; p < d.total_nodes(); ++p) acc.values[p] += di.values[p];
    }
    return acc;
}

std::vector<SpatialField> classical_grad(const SpatialField& field, GradScheme scheme) {
    std::vector<SpatialField> out;
    for (int i = 0; i < field.domain.dim; ++i) {
        const double h = field.domain.spacing(i);
        out.push_back(apply_along_lines(
            field, i,
            [&](const TimeGrid&, const std::vector<double>& x) { return grad_line(x, h, scheme); }));
    }
    return out;
}

SpatialField classical_div(const std::vector<SpatialField>& vfield, DivScheme scheme) {
    if (vfield.empty()) throw std::invalid_argument("classical_div: empty field");
    const BoxDomain& d = vfield[0].domain;
    SpatialField acc = SpatialField::zeros(d);
    for (int i = 0; i < d.dim; ++i) {
        const double h = d.spacing(i);
        SpatialField di = apply_along_lines(
            vfield[i], i,
            [&](const TimeGrid&, const std::vector<double>& x) { return div_line(x, h, scheme); });
        for (int p = 0; p < d.total_nodes(); ++p) acc.values[p] += di.values[p];
    }
    return acc;
}

std::vector<SpatialField> componentwise_product(const std::vector<double>& gamma,
                                                const std::vector<SpatialField>& v) {
    if (gamma.size() != v.size())
        throw std::invalid_argument("componentwise_product: size mismatch");
    std::vector<SpatialField> out;
    out.reserve(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        SpatialField f = v[i];
        for (auto& x : f.values) x *= gamma[i];
        f.dirichlet_zero = false;
        out.push_back(std::move(f));
    }
    return out;
}

CheckReport check_div_grad(const SpatialField& field, const std::vector<double>& gamma) {
    const BoxDomain& d = field.domain;
    if (static_cast<int>(gamma.size()) != d.dim)
        throw std::invalid_argument("check_div_grad: gamma size mismatch");
    const FracOrder half(0.5);
    const FracVecKind cfwd{FracKind::Caputo, Direction::Forward};
    const FracVecKind rlfwd{FracKind::RL, Direction::Forward};

    auto run = [&](CaputoScheme scheme, GradScheme ref_scheme) {
        auto grad_half = frac_gradient(field, half, cfwd, scheme);
        auto scaled = componentwise_product(gamma, grad_half);
        SpatialField lhs = frac_divergence(scaled, half, rlfwd, scheme);
        auto grad = classical_grad(field, ref_scheme);
        double err = 0.0;
        for (int p = 0; p < d.total_nodes(); ++p) {
            const auto idx = d.multi_index(p);
            if (d.is_boundary(idx)) continue;
            double rhs = 0.0;
            for (int i = 0; i < d.dim; ++i) rhs += gamma[i] * grad[i].values[p];
            const double v = lhs.values[p];
            if (!std::isfinite(v)) continue;
            err = std::max(err, std::abs(v - rhs));
        }
        return err;
    };

    CheckReport rep;
    rep.name = "div_grad";
    rep.grid_sizes = d.n;
    rep.metrics["err_l1"] = run(CaputoScheme::L1, GradScheme::Centered);
    // GL half-kernels compose exactly to the backward difference
    {
        auto grad_half = frac_gradient(field, half, cfwd, CaputoScheme::GL);
        auto scaled = componentwise_product(gamma, grad_half);
        SpatialField lhs = frac_divergence(scaled, half, rlfwd, CaputoScheme::GL);
        double err = 0.0;
        for (int p = 0; p < d.total_nodes(); ++p) {
            const auto idx = d.multi_index(p);
            if (d.is_boundary(idx)) continue;
            double rhs = 0.0;
            for (int i = 0; i < d.dim; ++i) {
                // backward difference along axis i
                std::vector<int> im = idx;
                im[i] -= 1;
                rhs += gamma[i] *
                       (field.values[p] - field.values[d.flat_index(im)]) / d.spacing(i);
            }
            err = std::max(err, std::abs(lhs.values[p] - rhs));
        }
        rep.metrics["err_gl"] = err;
    }
    rep.pass = rep.metrics["err_gl"] <= 1e-12;
    return rep;
}

CheckReport check_green_riemann(const SpatialField& u,
                                const std::vector<SpatialField>& v, FracOrder alpha) {
    if (!u.dirichlet_zero)
        throw std::invalid_argument("check_green_riemann: u must be dirichlet_zero");
    const BoxDomain& d = u.domain;
    if (static_cast<int>(v.size()) != d.dim)
        throw std::invalid_argument("check_green_riemann: v needs d components");

    const FracVecKind cbwd{FracKind::Caputo, Direction::Backward};
    const FracVecKind rlfwd{FracKind::RL, Direction::Forward};
    auto grad_u = frac_gradient(u, alpha, cbwd, CaputoScheme::L1);
    SpatialField div_v = frac_divergence(v, alpha, rlfwd, CaputoScheme::L1);

    SpatialField lhs_f = SpatialField::zeros(d);
    SpatialField rhs_f = SpatialField::zeros(d);
    for (int p = 0; p < d.total_nodes(); ++p) {
        const auto idx = d.multi_index(p);
        double dot = 0.0;
        for (int i = 0; i < d.dim; ++i) dot += v[i].values[p] * grad_u[i].values[p];
        lhs_f.values[p] = dot;
        const double dv = div_v.values[p];
        // flagged singular faces carry u = 0; their contribution is excluded
        rhs_f.values[p] =
            (d.is_boundary(idx) || !std::isfinite(dv)) ? 0.0 : dv * u.values[p];
    }
    const double lhs = integrate(lhs_f);
    const double rhs = integrate(rhs_f);

    CheckReport rep;
    rep.name = "green_riemann";
    rep.grid_sizes = d.n;
    rep.metrics["lhs"] = lhs;
    rep.metrics["rhs"] = rhs;
    rep.metrics["abs_diff"] = std::abs(lhs - rhs);
    rep.pass = std::isfinite(lhs) && std::isfinite(rhs);
    return rep;
}

}  // namespace fracvar
