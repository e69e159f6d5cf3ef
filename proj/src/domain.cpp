#include "fracvar/domain.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace fracvar {

BoxDomain::BoxDomain(std::vector<double> lo_, std::vector<double> hi_,
                     std::vector<int> n_)
    : dim(static_cast<int>(lo_.size())), lo(std::move(lo_)), hi(std::move(hi_)),
      n(std::move(n_)) {
    if (dim < 1 || hi.size() != lo.size() || n.size() != lo.size())
        throw std::invalid_argument("BoxDomain: inconsistent dimensions");
    for (int i = 0; i < dim; ++i) {
        if (!(lo[i] < hi[i])) throw std::invalid_argument("BoxDomain: requires lo < hi");
        if (n[i] < 3) throw std::invalid_argument("BoxDomain: requires n >= 3 per axis");
    }
}

int BoxDomain::total_nodes() const {
    int t = 1;
    for (int i = 0; i < dim; ++i) t *= nodes(i);
    return t;
}

int BoxDomain::stride(int axis) const {
    int s = 1;
    for (int i = axis + 1; i < dim; ++i) s *= nodes(i);
    return s;
}

int BoxDomain::flat_index(const std::vector<int>& idx) const {
    int f = 0;
    for (int i = 0; i < dim; ++i) {
        if (idx[i] < 0 || idx[i] > n[i])
            throw std::out_of_range("BoxDomain: index out of range");
        f = f * nodes(i) + idx[i];
    }
    return f;
}

std::vector<int> BoxDomain::multi_index(int flat) const {
    std::vector<int> idx(dim);
    for (int i = dim - 1; i >= 0; --i) {
        idx[i] = flat % nodes(i);
        flat /= nodes(i);
    }
    return idx;
}

bool BoxDomain::is_boundary(const std::vector<int>& idx) const {
    for (int i = 0; i < dim; ++i)
        if (idx[i] == 0 || idx[i] == n[i]) return true;
    return false;
}

std::vector<double> BoxDomain::point(const std::vector<int>& idx) const {
    std::vector<double> x(dim);
    for (int i = 0; i < dim; ++i) x[i] = coord(i, idx[i]);
    return x;
}

bool BoxDomain::same_grid(const BoxDomain& o) const {
    return dim == o.dim && lo == o.lo && hi == o.hi && n == o.n;
}

SpatialField::SpatialField(BoxDomain d, std::vector<double> v, bool dirichlet)
    : domain(std::move(d)), values(std::move(v)), dirichlet_zero(dirichlet) {
    if (static_cast<int>(values.size()) != domain.total_nodes())
        throw std::invalid_argument("SpatialField: values size mismatch");
    if (dirichlet_zero) {
        for (int p = 0; p < domain.total_nodes(); ++p)
            if (domain.is_boundary(domain.multi_index(p)) && values[p] != 0.0)
                throw std::invalid_argument(
                    "SpatialField: dirichlet_zero field nonzero on boundary");
    }
}

SpatialField SpatialField::zeros(const BoxDomain& d, bool dirichlet) {
    return SpatialField(d, std::vector<double>(d.total_nodes(), 0.0), dirichlet);
}

SpatialField SpatialField::sample(
    const BoxDomain& d, const std::function<double(const std::vector<double>&)>& f,
    bool dirichlet) {
    std::vector<double> v(d.total_nodes());
    for (int p = 0; p < d.total_nodes(); ++p) v[p] = f(d.point(d.multi_index(p)));
    return SpatialField(d, std::move(v), dirichlet);
}

SpaceTimeField::SpaceTimeField(TimeGrid tg, BoxDomain d, std::vector<double> v,
                               BoundaryClass bc)
    : tgrid(tg), domain(std::move(d)), values(std::move(v)), boundary_class(bc) {
    const size_t expected =
        static_cast<size_t>(tgrid.num_nodes()) * domain.total_nodes();
    if (values.size() != expected)
        throw std::invalid_argument("SpaceTimeField: values size mismatch");
    if (bc != BoundaryClass::None) {
        for (int j = 0; j <= tgrid.n; ++j)
            for (int p = 0; p < domain.total_nodes(); ++p) {
                const bool bspace = domain.is_boundary(domain.multi_index(p));
                const bool btime = (j == 0 || j == tgrid.n);
                const bool must_vanish =
                    bspace || (bc == BoundaryClass::SpacetimeZero && btime);
                if (must_vanish && at(j, p) != 0.0)
                    throw std::invalid_argument(
                        "SpaceTimeField: boundary_class violated");
            }
    }
}

SpaceTimeField SpaceTimeField::zeros(const TimeGrid& tg, const BoxDomain& d,
                                     BoundaryClass bc) {
    return SpaceTimeField(
        tg, d, std::vector<double>(static_cast<size_t>(tg.num_nodes()) * d.total_nodes(), 0.0),
        bc);
}

SpaceTimeField SpaceTimeField::sample(
    const TimeGrid& tg, const BoxDomain& d,
    const std::function<double(double, const std::vector<double>&)>& f,
    BoundaryClass bc) {
    std::vector<double> v(static_cast<size_t>(tg.num_nodes()) * d.total_nodes());
    for (int j = 0; j <= tg.n; ++j)
        for (int p = 0; p < d.total_nodes(); ++p)
            v[static_cast<size_t>(j) * d.total_nodes() + p] =
                f(tg.node(j), d.point(d.multi_index(p)));
    return SpaceTimeField(tg, d, std::move(v), bc);
}

std::vector<double> SpaceTimeField::slice(int j) const {
    const int ns = nspace();
    return std::vector<double>(values.begin() + static_cast<size_t>(j) * ns,
                               values.begin() + static_cast<size_t>(j + 1) * ns);
}

Samples1D line_extract(const SpatialField& field, int axis,
                       const std::vector<int>& base) {
    const BoxDomain& d = field.domain;
    if (axis < 0 || axis >= d.dim) throw std::invalid_argument("line_extract: bad axis");
    std::vector<int> idx = base;
    if (static_cast<int>(idx.size()) != d.dim)
        throw std::invalid_argument("line_extract: bad base index");
    TimeGrid g(d.lo[axis], d.hi[axis], d.n[axis]);
    std::vector<double> v(d.nodes(axis));
    for (int i = 0; i <= d.n[axis]; ++i) {
        idx[axis] = i;
        v[i] = field.values[d.flat_index(idx)];
    }
    return Samples1D(g, std::move(v));
}

SpatialField line_insert(const SpatialField& field, int axis,
                         const std::vector<int>& base, const Samples1D& line) {
    const BoxDomain& d = field.domain;
    if (axis < 0 || axis >= d.dim) throw std::invalid_argument("line_insert: bad axis");
    if (line.grid.n != d.n[axis])
        throw std::invalid_argument("line_insert: line length mismatch");
    std::vector<double> v = field.values;
    std::vector<int> idx = base;
    for (int i = 0; i <= d.n[axis]; ++i) {
        idx[axis] = i;
        v[d.flat_index(idx)] = line.values[i];
    }
    return SpatialField(d, std::move(v), field.dirichlet_zero);
}

std::vector<double> quad_weights(int n, double h, QuadRule rule) {
    std::vector<double> q(n + 1, h);
    if (rule == QuadRule::Trapezoid) {
        q[0] = 0.5 * h;
        q[n] = 0.5 * h;
    } else if (rule == QuadRule::LeftRectangle) {
        q[n] = 0.0;
    } else {
        q[0] = 0.0;
    }
    return q;
}

double integrate(const SpatialField& field, QuadRule rule) {
    const BoxDomain& d = field.domain;
    std::vector<std::vector<double>> q(d.dim);
    for (int i = 0; i < d.dim; ++i) q[i] = quad_weights(d.n[i], d.spacing(i), rule);
    double acc = 0.0;
    for (int p = 0; p < d.total_nodes(); ++p) {
        const auto idx = d.multi_index(p);
        double w = 1.0;
        for (int i = 0; i < d.dim; ++i) w *= q[i][idx[i]];
        acc += w * field.values[p];
    }
    return acc;
}

double integrate(const SpaceTimeField& field, QuadRule rule) {
    return integrate(field, rule, QuadRule::Trapezoid);
}

double integrate(const SpaceTimeField& field, QuadRule time_rule, QuadRule space_rule) {
    const auto qt = quad_weights(field.tgrid.n, field.tgrid.h(), time_rule);
    const BoxDomain& d = field.domain;
    std::vector<std::vector<double>> q(d.dim);
    for (int i = 0; i < d.dim; ++i)
        q[i] = quad_weights(d.n[i], d.spacing(i), space_rule);
    double acc = 0.0;
    for (int j = 0; j <= field.tgrid.n; ++j) {
        if (qt[j] == 0.0) continue;
        double slice_acc = 0.0;
        for (int p = 0; p < d.total_nodes(); ++p) {
            const auto idx = d.multi_index(p);
            double w = 1.0;
            for (int i = 0; i < d.dim; ++i) w *= q[i][idx[i]];
            slice_acc += w * field.at(j, p);
        }
        acc += qt[j] * slice_acc;
    }
    return acc;
}

void for_each_line(const BoxDomain& d, int axis,
                   const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(d.dim, 0);
    while (true) {
        fn(idx);
        int i = d.dim - 1;
        for (; i >= 0; --i) {
            if (i == axis) continue;
            if (++idx[i] <= d.n[i]) break;
            idx[i] = 0;
        }
        if (i < 0) break;
    }
}

int max_threads() {
    const char* env = std::getenv("FRACVAR_THREADS");
    if (!env) return 1;
    const int t = std::atoi(env);
    if (t < 1) throw std::invalid_argument("FRACVAR_THREADS must be an integer >= 1");
    return t;
}

void parallel_for(int count, const std::function<void(int)>& body) {
    const int nthreads = std::min(max_threads(), count > 0 ? count : 1);
    if (nthreads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += nthreads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace fracvar
