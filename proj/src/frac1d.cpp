#include "fracvar/frac1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracvar {

FracOrder::FracOrder(double a) : alpha(a) {
    if (!(a > 0.0 && a < 1.0))
        throw std::domain_error("FracOrder: alpha must lie in (0,1)");
}

TimeGrid::TimeGrid(double a_, double b_, int n_) : a(a_), b(b_), n(n_) {
    if (!(a < b)) throw std::invalid_argument("TimeGrid: requires a < b");
    if (n < 2) throw std::invalid_argument("TimeGrid: requires n >= 2");
}

Samples1D::Samples1D(TimeGrid g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid.num_nodes())
        throw std::invalid_argument("Samples1D: values length != node count");
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
    // Lanczos approximation, g = 7, 9 coefficients.
    static const double c[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection, keeps the approximation on x >= 0.5
        return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
    }
    double z = x - 1.0;
    double acc = c[0];
    for (int i = 1; i < 9; ++i) acc += c[i] / (z + i);
    double t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

GLWeights gl_weights(FracOrder alpha, int n) {
    if (n < 0) throw std::invalid_argument("gl_weights: requires n >= 0");
    GLWeights out;
    out.alpha = alpha.alpha;
    out.w.resize(n + 1);
    out.w[0] = 1.0;
    for (int k = 1; k <= n; ++k)
        out.w[k] = out.w[k - 1] * (k - 1.0 - alpha.alpha) / k;
    return out;
}

namespace {

std::vector<double> reversed(const std::vector<double>& v) {
    return std::vector<double>(v.rbegin(), v.rend());
}

// Forward RL integral on raw values.
std::vector<double> rl_integral_forward(const std::vector<double>& f, double h,
                                        double beta) {
    const int n = static_cast<int>(f.size()) - 1;
    const double inv_gamma = 1.0 / gamma_fn(beta);
    // p[k] = (k h)^beta, q[k] = (k h)^{beta+1}
    std::vector<double> p(n + 1), q(n + 1);
    for (int k = 0; k <= n; ++k) {
        p[k] = std::pow(k * h, beta);
        q[k] = std::pow(k * h, beta + 1.0);
    }
    std::vector<double> out(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < j; ++i) {
            const int m = j - i;  // cell [t_i, t_{i+1}], kernel distance m..m-1
            const double s1 = m * h;
            const double A = (p[m] - p[m - 1]) / beta;
            const double B = s1 * A - (q[m] - q[m - 1]) / (beta + 1.0);
            acc += f[i] * A + (f[i + 1] - f[i]) / h * B;
        }
        out[j] = inv_gamma * acc;
    }
    return out;
}

// L1 difference weights b_k = (k+1)^{1-a} - k^{1-a}.
std::vector<double> l1_b_weights(double alpha, int n) {
    std::vector<double> b(n);
    for (int k = 0; k < n; ++k)
        b[k] = std::pow(k + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(k), 1.0 - alpha);
    return b;
}

}  // namespace

void gl_apply_forward(const GLWeights& w, double h, const std::vector<double>& x,
                      std::vector<double>& y) {
    const int n = static_cast<int>(x.size()) - 1;
    const double scale = std::pow(h, -w.alpha);
    y.assign(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        double acc = 0.0;
        for (int k = 0; k <= j; ++k) acc += w.w[k] * x[j - k];
        y[j] = scale * acc;
    }
}

void gl_apply_forward_transpose(const GLWeights& w, double h,
                                const std::vector<double>& x, std::vector<double>& y) {
    const int n = static_cast<int>(x.size()) - 1;
    const double scale = std::pow(h, -w.alpha);
    y.assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double acc = 0.0;
        for (int j = k; j <= n; ++j) acc += w.w[j - k] * x[j];
        y[k] = scale * acc;
    }
}

void l1_caputo_forward(double alpha, double h, const std::vector<double>& x,
                       std::vector<double>& y) {
    const int n = static_cast<int>(x.size()) - 1;
    const double mu = std::pow(h, -alpha) / gamma_fn(2.0 - alpha);
    const std::vector<double> b = l1_b_weights(alpha, n);
    y.assign(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < j; ++i) acc += b[j - 1 - i] * (x[i + 1] - x[i]);
        y[j] = mu * acc;
    }
}

void l1_caputo_forward_transpose(double alpha, double h, const std::vector<double>& x,
                                 std::vector<double>& y) {
    const int n = static_cast<int>(x.size()) - 1;
    const double mu = std::pow(h, -alpha) / gamma_fn(2.0 - alpha);
    const std::vector<double> b = l1_b_weights(alpha, n);
    y.assign(n + 1, 0.0);
    double acc0 = 0.0;
    for (int j = 1; j <= n; ++j) acc0 += b[j - 1] * x[j];
    y[0] = -mu * acc0;
    for (int k = 1; k <= n; ++k) {
        double acc = b[0] * x[k];
        for (int j = k + 1; j <= n; ++j) acc += (b[j - k] - b[j - k - 1]) * x[j];
        y[k] = mu * acc;
    }
}

Samples1D rl_integral(const Samples1D& f, double beta, Direction dir) {
    if (!(beta > 0.0)) throw std::domain_error("rl_integral: requires beta > 0");
    const double h = f.grid.h();
    if (dir == Direction::Forward)
        return Samples1D(f.grid, rl_integral_forward(f.values, h, beta));
    auto out = rl_integral_forward(reversed(f.values), h, beta);
    return Samples1D(f.grid, reversed(out));
}

Samples1D caputo_deriv(const Samples1D& f, FracOrder alpha, Direction dir,
                       CaputoScheme scheme) {
    const double h = f.grid.h();
    const int n = f.grid.n;
    auto forward = [&](const std::vector<double>& x) {
        std::vector<double> y;
        if (scheme == CaputoScheme::L1) {
            l1_caputo_forward(alpha.alpha, h, x, y);
        } else {
            // GL on f - f(a): equivalent to Caputo for 0 < alpha < 1
            std::vector<double> shifted(x.size());
            for (size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - x[0];
            gl_apply_forward(gl_weights(alpha, n), h, shifted, y);
        }
        return y;
    };
    if (dir == Direction::Forward) return Samples1D(f.grid, forward(f.values));
    return Samples1D(f.grid, reversed(forward(reversed(f.values))));
}

Samples1D rl_deriv(const Samples1D& f, FracOrder alpha, Direction dir,
                   RLScheme scheme) {
    const double h = f.grid.h();
    const int n = f.grid.n;
    auto forward = [&](const std::vector<double>& x) {
        std::vector<double> y;
        if (scheme == RLScheme::GL) {
            gl_apply_forward(gl_weights(alpha, n), h, x, y);
            return y;
        }
        l1_caputo_forward(alpha.alpha, h, x, y);
        const double f0 = x[0];
        if (f0 != 0.0) {
            const double c = f0 / gamma_fn(1.0 - alpha.alpha);
            y[0] = std::numeric_limits<double>::infinity();  // flagged node
            for (int j = 1; j <= n; ++j) y[j] += c * std::pow(j * h, -alpha.alpha);
        }
        return y;
    };
    if (dir == Direction::Forward) return Samples1D(f.grid, forward(f.values));
    return Samples1D(f.grid, reversed(forward(reversed(f.values))));
}

double power_rule_oracle(double mu, FracOrder alpha, double t, double a) {
    if (!(t > a)) throw std::domain_error("power_rule_oracle: requires t > a");
    if (!(mu >= 0.0)) throw std::domain_error("power_rule_oracle: requires mu >= 0");
    const double arg = mu + 1.0 - alpha.alpha;
    if (!(arg > 0.0))
        throw std::domain_error("power_rule_oracle: mu+1-alpha must be positive");
    return gamma_fn(mu + 1.0) / gamma_fn(arg) * std::pow(t - a, mu - alpha.alpha);
}

CheckReport check_composition(const Samples1D& f, CompositionVariant variant) {
    const int n = f.grid.n;
    if (n < 8) throw std::invalid_argument("check_composition: requires n >= 8");
    const double h = f.grid.h();
    const FracOrder half(0.5);

    Samples1D inner = caputo_deriv(f, half, Direction::Forward, CaputoScheme::L1);
    Samples1D outer = [&] {
        switch (variant) {
            case CompositionVariant::CaputoCaputo:
                return caputo_deriv(inner, half, Direction::Forward, CaputoScheme::L1);
            case CompositionVariant::RLCaputo:
                return rl_deriv(inner, half, Direction::Forward, RLScheme::L1PlusBoundary);
            default:
                return rl_deriv(inner, half, Direction::Backward, RLScheme::L1PlusBoundary);
        }
    }();

    double err_sup = 0.0;
    for (int j = 1; j < n; ++j) {
        const double fprime = (f.values[j + 1] - f.values[j - 1]) / (2.0 * h);
        const double v = outer.values[j];
        if (!std::isfinite(v)) continue;  // flagged RL endpoint
        err_sup = std::max(err_sup, std::abs(v - fprime));
    }

    CheckReport rep;
    rep.name = "composition";
    rep.grid_sizes = {n};
    rep.metrics["err_sup"] = err_sup;
    rep.pass = std::isfinite(err_sup);
    return rep;
}

CheckReport check_ibp(const Samples1D& f, const Samples1D& g, FracOrder alpha,
                      IbpVariant variant) {
    if (f.grid.n != g.grid.n || f.grid.a != g.grid.a || f.grid.b != g.grid.b)
        throw std::invalid_argument("check_ibp: f and g must share one grid");
    if (std::abs(g.values.front()) > 1e-14 || std::abs(g.values.back()) > 1e-14)
        throw std::invalid_argument("check_ibp: g must vanish at both endpoints");

    const int n = f.grid.n;
    const double h = f.grid.h();
    auto trapz = [&](const std::vector<double>& p) {
        double s = 0.5 * (p.front() + p.back());
        for (int j = 1; j < n; ++j) s += p[j];
        return s * h;
    };

    Samples1D df = (variant == IbpVariant::CaputoCaputo)
                       ? caputo_deriv(f, alpha, Direction::Forward, CaputoScheme::L1)
                       : rl_deriv(f, alpha, Direction::Forward, RLScheme::L1PlusBoundary);
    Samples1D dg = caputo_deriv(g, alpha, Direction::Backward, CaputoScheme::L1);

    std::vector<double> lhs_p(n + 1), rhs_p(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double dfj = df.values[j];
        // flagged RL endpoint multiplies g = 0 there
        lhs_p[j] = std::isfinite(dfj) ? dfj * g.values[j] : 0.0;
        rhs_p[j] = f.values[j] * dg.values[j];
    }

    CheckReport rep;
    rep.name = "integration_by_parts";
    rep.grid_sizes = {n};
    const double lhs = trapz(lhs_p), rhs = trapz(rhs_p);
    rep.metrics["lhs"] = lhs;
    rep.metrics["rhs"] = rhs;
    rep.metrics["abs_diff"] = std::abs(lhs - rhs);
    rep.pass = std::isfinite(lhs) && std::isfinite(rhs);
    return rep;
}

}  // namespace fracvar
