#pragma once

#include <functional>
#include <vector>

#include "fracvar/frac1d.hpp"

namespace fracvar {

/// Axis-aligned box with a node-centered uniform tensor grid.
/// Flat node indices are lexicographic with the last axis fastest.
struct BoxDomain {
    int dim;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<int> n;  // intervals per axis

    BoxDomain(std::vector<double> lo_, std::vector<double> hi_, std::vector<int> n_);

    double spacing(int axis) const { return (hi[axis] - lo[axis]) / n[axis]; }
    int nodes(int axis) const { return n[axis] + 1; }
    int total_nodes() const;
    int stride(int axis) const;

    int flat_index(const std::vector<int>& idx) const;
    std::vector<int> multi_index(int flat) const;
    bool is_boundary(const std::vector<int>& idx) const;
    double coord(int axis, int i) const { return lo[axis] + i * spacing(axis); }
    std::vector<double> point(const std::vector<int>& idx) const;

    bool same_grid(const BoxDomain& o) const;
};

/// Scalar field on the nodes of a BoxDomain.
struct SpatialField {
    BoxDomain domain;
    std::vector<double> values;
    bool dirichlet_zero;

    SpatialField(BoxDomain d, std::vector<double> v, bool dirichlet = false);

    static SpatialField zeros(const BoxDomain& d, bool dirichlet = false);
    static SpatialField sample(const BoxDomain& d,
                               const std::function<double(const std::vector<double>&)>& f,
                               bool dirichlet = false);
};

enum class BoundaryClass { None, SpaceZero, SpacetimeZero };

/// Scalar field u(t,x) on a tensor time x box grid, time-major storage.
struct SpaceTimeField {
    TimeGrid tgrid;
    BoxDomain domain;
    std::vector<double> values;  // (n_t+1) * total_nodes
    BoundaryClass boundary_class;

    SpaceTimeField(TimeGrid tg, BoxDomain d, std::vector<double> v,
                   BoundaryClass bc = BoundaryClass::None);

    static SpaceTimeField zeros(const TimeGrid& tg, const BoxDomain& d,
                                BoundaryClass bc = BoundaryClass::None);
    static SpaceTimeField sample(
        const TimeGrid& tg, const BoxDomain& d,
        const std::function<double(double, const std::vector<double>&)>& f,
        BoundaryClass bc = BoundaryClass::None);

    int nspace() const { return domain.total_nodes(); }
    double& at(int j, int p) { return values[static_cast<size_t>(j) * nspace() + p]; }
    double at(int j, int p) const { return values[static_cast<size_t>(j) * nspace() + p]; }
    std::vector<double> slice(int j) const;
};

/// Samples of v along the full grid line through `base` in direction `axis`.
Samples1D line_extract(const SpatialField& field, int axis,
                       const std::vector<int>& base);

/// Inverse of line_extract; returns a rebuilt field.
SpatialField line_insert(const SpatialField& field, int axis,
                         const std::vector<int>& base, const Samples1D& line);

enum class QuadRule { Trapezoid, LeftRectangle, RightRectangle };

/// 1D quadrature weights on a uniform grid with n intervals. LeftRectangle
/// puts weight h on nodes 0..n-1; RightRectangle on nodes 1..n (aligned with
/// the causal GL convolution support).
std::vector<double> quad_weights(int n, double h, QuadRule rule);

/// Tensor-product quadrature over the box (trapezoid per axis by default).
double integrate(const SpatialField& field, QuadRule rule = QuadRule::Trapezoid);

/// Space-time quadrature: `rule` in time, trapezoid in space.
double integrate(const SpaceTimeField& field, QuadRule rule = QuadRule::Trapezoid);

/// Space-time quadrature with independent time and space rules.
double integrate(const SpaceTimeField& field, QuadRule time_rule, QuadRule space_rule);

/// Visit every grid line of `axis`: calls fn(base) for each off-axis base index.
void for_each_line(const BoxDomain& d, int axis,
                   const std::function<void(const std::vector<int>&)>& fn);

/// Maximum thread count from FRACVAR_THREADS (>= 1); 1 when unset.
int max_threads();

/// Deterministic parallel loop over [0, count): chunks are assigned by index,
/// results must be written to disjoint slots.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace fracvar
