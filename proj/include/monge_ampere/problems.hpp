#pragma once

#include "errors.hpp"
#include "grid.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace ma {

/// Dirichlet problem det(D^2 u) = f on a box, u = g on its boundary.
template <int Dim>
struct Problem {
    using ScalarFn = std::function<double(const Point<Dim>&)>;

    std::string name;
    Point<Dim> origin{};
    double extent = 1.0;
    ScalarFn source;
    ScalarFn boundary;
    std::optional<ScalarFn> exact;

    GridGeometry<Dim> geometry(int n) const { return GridGeometry<Dim>(n, extent, origin); }
};

inline constexpr std::array<std::string_view, 9> example_ids{
    "ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7", "quad2d", "quad3d"};

/// Spatial dimension of a cataloged example; throws ConfigError for unknown ids.
inline int example_dim(std::string_view id) {
    if (id == "ex1" || id == "ex2" || id == "ex3" || id == "quad2d") return 2;
    if (id == "ex4" || id == "ex5" || id == "ex6" || id == "ex7" || id == "quad3d") return 3;
    throw ConfigError("unknown example '" + std::string(id) + "' (expected ex1..ex7, quad2d, quad3d)");
}

namespace detail {

template <int Dim>
double norm2(const Point<Dim>& p) {
    double s = 0.0;
    for (double x : p) s += x * x;
    return s;
}

template <int Dim>
Problem<Dim> with_exact(std::string name, typename Problem<Dim>::ScalarFn f, typename Problem<Dim>::ScalarFn u,
                        double extent = 1.0) {
    Problem<Dim> p;
    p.name = std::move(name);
    p.extent = extent;
    p.source = std::move(f);
    p.boundary = u;
    p.exact = std::move(u);
    return p;
}

} // namespace detail

/// Benchmark problem by id. Dim must agree with example_dim(id).
template <int Dim>
Problem<Dim> catalog(std::string_view id) {
    using detail::norm2;
    using P = Point<Dim>;
    if (example_dim(id) != Dim)
        throw ConfigError("example '" + std::string(id) + "' is not a " + std::to_string(Dim) + "D problem");

    if constexpr (Dim == 2) {
        if (id == "ex1")
            return detail::with_exact<2>(
                "ex1", [](const P& p) { const double r2 = norm2<2>(p); return (1.0 + r2) * std::exp(r2); },
                [](const P& p) { return std::exp(0.5 * norm2<2>(p)); });
        if (id == "ex2")
            return detail::with_exact<2>(
                "ex2", [](const P& p) { return 1.0 / std::sqrt(norm2<2>(p)); },
                [](const P& p) { return 2.0 * std::numbers::sqrt2 / 3.0 * std::pow(norm2<2>(p), 0.75); });
        if (id == "ex3")
            return detail::with_exact<2>(
                "ex3", [](const P& p) { const double d = 2.0 - norm2<2>(p); return 2.0 / (d * d); },
                [](const P& p) { return -std::sqrt(2.0 - norm2<2>(p)); });
        return detail::with_exact<2>(
            "quad2d", [](const P&) { return 1.0; }, [](const P& p) { return 0.5 * norm2<2>(p); });
    } else {
        if (id == "ex4")
            return detail::with_exact<3>(
                "ex4", [](const P& p) { const double r2 = norm2<3>(p); return (1.0 + r2) * std::exp(1.5 * r2); },
                [](const P& p) { return std::exp(0.5 * norm2<3>(p)); });
        if (id == "ex5")
            return detail::with_exact<3>(
                "ex5",
                [](const P& p) { return (std::sin(p[0]) + 1.0) * (std::sin(p[1]) + 1.0) * (std::sin(p[2]) + 1.0); },
                [](const P& p) {
                    return -std::sin(p[0]) - std::sin(p[1]) - std::sin(p[2]) + 0.5 * norm2<3>(p);
                },
                std::numbers::pi);
        if (id == "ex6")
            return detail::with_exact<3>(
                "ex6", [](const P& p) { return std::pow(norm2<3>(p), -0.75) / 16.0; },
                [](const P& p) { return std::pow(norm2<3>(p), 0.75) / 3.0; });
        if (id == "ex7")
            // printed as f(x,y) but the formula and the exact solution are three-dimensional
            return detail::with_exact<3>(
                "ex7", [](const P& p) { return 3.0 * std::pow(3.0 - norm2<3>(p), -2.5); },
                [](const P& p) { return -std::sqrt(3.0 - norm2<3>(p)); });
        return detail::with_exact<3>(
            "quad3d", [](const P&) { return 1.0; }, [](const P& p) { return 0.5 * norm2<3>(p); });
    }
}

/// f at interior nodes; boundary entries are 0 and never read by the operator.
template <int Dim>
GridField<Dim> sample_source(const Problem<Dim>& problem, const GridGeometry<Dim>& geom) {
    GridField<Dim> rhs(geom);
    for_each_interior(geom, [&](const Index<Dim>& idx) {
        const double v = problem.source(node_coordinate(geom, idx));
        if (!std::isfinite(v))
            throw DataError("source of '" + problem.name + "' is not finite at an interior node");
        rhs.at(idx) = v;
    });
    return rhs;
}

/// Overwrite every boundary node with g; interior values are untouched.
template <int Dim>
void apply_boundary(const Problem<Dim>& problem, GridField<Dim>& field) {
    const auto& geom = field.geometry();
    for_each_boundary(geom, [&](const Index<Dim>& idx) { field.at(idx) = problem.boundary(node_coordinate(geom, idx)); });
}

/// Exact solution sampled at every node; requires problem.exact.
template <int Dim>
GridField<Dim> sample_exact(const Problem<Dim>& problem, const GridGeometry<Dim>& geom) {
    if (!problem.exact) throw ConfigError("problem '" + problem.name + "' has no analytic solution");
    return sample(geom, *problem.exact);
}

/// Boundary data with a constant interior value.
template <int Dim>
GridField<Dim> boundary_initialized(const Problem<Dim>& problem, const GridGeometry<Dim>& geom, double interior = 0.0) {
    GridField<Dim> field(geom, interior);
    apply_boundary(problem, field);
    return field;
}

} // namespace ma
