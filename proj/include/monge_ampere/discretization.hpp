#pragma once

#include "errors.hpp"
#include "grid.hpp"

#include <array>
#include <cstddef>
#include <type_traits>

namespace ma {

/// Neighbor sums entering the 3D cubic. a, b, c are sums of the two axis
/// neighbors along x, y, z; r, s, t are the quarter-weighted four-point cross
/// differences for u_xy, u_xz, u_yz.
struct LocalCoefficients3D {
    double a = 0, b = 0, c = 0;
    double r = 0, s = 0, t = 0;
};

/// 2D analogue: axis sums a, b and the u_xy cross term r.
struct LocalCoefficients2D {
    double a = 0, b = 0;
    double r = 0;
};

template <int Dim>
using LocalCoefficients = std::conditional_t<Dim == 2, LocalCoefficients2D, LocalCoefficients3D>;

template <int Dim>
using SymMatrix = std::array<std::array<double, Dim>, Dim>;

/// c3 v^3 + c2 v^2 + c1 v + c0
struct CubicCoefficients {
    double c3, c2, c1, c0;
    double operator()(double v) const { return ((c3 * v + c2) * v + c1) * v + c0; }
};

/// q2 v^2 + q1 v + q0
struct QuadraticCoefficients {
    double q2, q1, q0;
    double operator()(double v) const { return (q2 * v + q1) * v + q0; }
};

namespace detail {

// Gather from flat storage at interior flat index p. sy/sz are the y/z strides.
inline LocalCoefficients2D gather(const double* u, std::size_t p, std::size_t sy) {
    LocalCoefficients2D k;
    k.a = u[p + 1] + u[p - 1];
    k.b = u[p + sy] + u[p - sy];
    k.r = 0.25 * (u[p + 1 + sy] + u[p - 1 - sy] - u[p - 1 + sy] - u[p + 1 - sy]);
    return k;
}

inline LocalCoefficients3D gather(const double* u, std::size_t p, std::size_t sy, std::size_t sz) {
    LocalCoefficients3D k;
    k.a = u[p + 1] + u[p - 1];
    k.b = u[p + sy] + u[p - sy];
    k.c = u[p + sz] + u[p - sz];
    k.r = 0.25 * (u[p + 1 + sy] + u[p - 1 - sy] - u[p - 1 + sy] - u[p + 1 - sy]);
    k.s = 0.25 * (u[p + 1 + sz] + u[p - 1 - sz] - u[p - 1 + sz] - u[p + 1 - sz]);
    k.t = 0.25 * (u[p + sy + sz] + u[p - sy - sz] - u[p + sy - sz] - u[p - sy + sz]);
    return k;
}

template <int Dim>
LocalCoefficients<Dim> gather(const GridField<Dim>& field, std::size_t p) {
    const auto& g = field.geometry();
    if constexpr (Dim == 2) return gather(field.data(), p, g.stride(1));
    else return gather(field.data(), p, g.stride(1), g.stride(2));
}

} // namespace detail

/// Neighbor coefficients at a strictly interior node. The center value is not read.
template <int Dim>
LocalCoefficients<Dim> local_coefficients(const GridField<Dim>& field, const IndexArg<Dim>& idx) {
    if (!field.geometry().is_interior(idx)) throw DomainError("local coefficients need a strictly interior node");
    return detail::gather(field, field.geometry().flat(idx));
}

/// Discrete Hessian given the neighbor coefficients and a trial center value v.
inline SymMatrix<2> hessian_from(const LocalCoefficients2D& k, double v, double h) {
    const double ih2 = 1.0 / (h * h);
    const double xy = k.r * ih2;
    return {{{(k.a - 2.0 * v) * ih2, xy}, {xy, (k.b - 2.0 * v) * ih2}}};
}

inline SymMatrix<3> hessian_from(const LocalCoefficients3D& k, double v, double h) {
    const double ih2 = 1.0 / (h * h);
    const double xy = k.r * ih2, xz = k.s * ih2, yz = k.t * ih2;
    return {{{(k.a - 2.0 * v) * ih2, xy, xz}, {xy, (k.b - 2.0 * v) * ih2, yz}, {xz, yz, (k.c - 2.0 * v) * ih2}}};
}

template <int Dim>
SymMatrix<Dim> discrete_hessian(const GridField<Dim>& field, const IndexArg<Dim>& idx, double center_value) {
    return hessian_from(local_coefficients(field, idx), center_value, field.geometry().h());
}

inline double determinant(const SymMatrix<2>& m) { return m[0][0] * m[1][1] - m[0][1] * m[0][1]; }

inline double determinant(const SymMatrix<3>& m) {
    const double xx = m[0][0], yy = m[1][1], zz = m[2][2];
    const double xy = m[0][1], xz = m[0][2], yz = m[1][2];
    return xx * yy * zz + 2.0 * xy * yz * xz - xx * yz * yz - yy * xz * xz - zz * xy * xy;
}

/// Sylvester's criterion on the leading principal minors.
inline bool is_positive_definite(const SymMatrix<2>& m) { return m[0][0] > 0.0 && determinant(m) > 0.0; }

inline bool is_positive_definite(const SymMatrix<3>& m) {
    return m[0][0] > 0.0 && m[0][0] * m[1][1] - m[0][1] * m[0][1] > 0.0 && determinant(m) > 0.0;
}

/// det(D^2_h u) at every interior node using the node's own value; 0 on the boundary.
template <int Dim>
void apply_operator(const GridField<Dim>& field, GridField<Dim>& out) {
    const auto& g = field.geometry();
    if (!(out.geometry() == g)) throw DomainError("operator output lives on a different grid");
    out.fill(0.0);
    const double h = g.h();
    for_each_interior(g, [&](const Index<Dim>& idx) {
        const std::size_t p = g.flat(idx);
        out[p] = determinant(hessian_from(detail::gather(field, p), field[p], h));
    });
}

template <int Dim>
GridField<Dim> apply_operator(const GridField<Dim>& field) {
    GridField<Dim> out(field.geometry());
    apply_operator(field, out);
    return out;
}

/// rhs - S_h(field) at interior nodes, 0 on the boundary.
template <int Dim>
void residual(const GridField<Dim>& field, const GridField<Dim>& rhs, GridField<Dim>& out) {
    const auto& g = field.geometry();
    if (!(rhs.geometry() == g) || !(out.geometry() == g)) throw DomainError("residual operands live on different grids");
    out.fill(0.0);
    const double h = g.h();
    for_each_interior(g, [&](const Index<Dim>& idx) {
        const std::size_t p = g.flat(idx);
        out[p] = rhs[p] - determinant(hessian_from(detail::gather(field, p), field[p], h));
    });
}

template <int Dim>
GridField<Dim> residual(const GridField<Dim>& field, const GridField<Dim>& rhs) {
    GridField<Dim> out(field.geometry());
    residual(field, rhs, out);
    return out;
}

/// Coefficients of the cubic in the center value v whose zeros solve det(D^2_h) = f:
///   -8 v^3 + 4(a+b+c) v^2 + 2(r^2+s^2+t^2-ab-ac-bc) v + (abc - a t^2 - b s^2 - c r^2 + 2rst - h^6 f).
/// The polynomial equals h^6 (det D^2_h(v) - f).
inline CubicCoefficients cubic_from_neighbors(const LocalCoefficients3D& k, double f, double h) {
    const double h6 = h * h * h * h * h * h;
    return {-8.0, 4.0 * (k.a + k.b + k.c), 2.0 * (k.r * k.r + k.s * k.s + k.t * k.t - k.a * k.b - k.a * k.c - k.b * k.c),
            k.a * k.b * k.c - k.a * k.t * k.t - k.b * k.s * k.s - k.c * k.r * k.r + 2.0 * k.r * k.s * k.t - h6 * f};
}

/// Expansion of (a - 2v)(b - 2v) - r^2 - h^4 f, i.e. h^4 (det D^2_h(v) - f).
inline QuadraticCoefficients quadratic_from_neighbors(const LocalCoefficients2D& k, double f, double h) {
    const double h4 = h * h * h * h;
    return {4.0, -2.0 * (k.a + k.b), k.a * k.b - k.r * k.r - h4 * f};
}

} // namespace ma
