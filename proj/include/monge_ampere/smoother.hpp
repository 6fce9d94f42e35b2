#pragma once

#include "discretization.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "rootfind.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace ma {

enum class SweepOrdering { Lexicographic, RedBlack };

/// Red-black is only offered in 2D; the 19-point 3D stencil couples same-colored nodes.
template <int Dim>
void validate_ordering(SweepOrdering ordering) {
    if (Dim == 3 && ordering == SweepOrdering::RedBlack)
        throw ConfigError("red-black ordering is only available for 2D problems");
}

struct SweepStats {
    double max_update = 0.0;
    std::size_t indefinite_updates = 0; ///< updates whose Hessian at the selected root is not positive definite
};

/// Residual history and bookkeeping for one solve.
struct SolveReport {
    std::vector<double> residual_history; ///< relative residual after each iteration/cycle
    int cycles = 0;                       ///< sweeps (Gauss-Seidel) or cycles (multigrid, FMG counts as 1)
    bool converged = false;
    std::optional<double> error_max;
    double wall_time = 0.0; ///< seconds
    std::size_t indefinite_updates = 0;

    double final_relres() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

namespace detail {

// New center value at one node. The cubic/quadratic in v is solved in the shifted
// variable mu = 2 (v - v0) / h^2 about the current value v0, where it reads
// det(H0 - mu I) = f with H0 the discrete Hessian at v0. This is the same polynomial
// as cubic_from_neighbors up to the affine change of variable, with O(1)
// coefficients instead of an h^6-scaled constant term.
inline double updated_value(const LocalCoefficients3D& k, double v0, double f, double h, bool& indefinite) {
    const auto m = hessian_from(k, v0, h);
    const double xx = m[0][0], yy = m[1][1], zz = m[2][2];
    const double xy = m[0][1], xz = m[0][2], yz = m[1][2];
    const double trace = xx + yy + zz;
    const double minors = xx * yy + xx * zz + yy * zz - xy * xy - xz * xz - yz * yz;
    const double det = determinant(m);
    // det(H0 - mu I) - f = -(mu^3 - trace mu^2 + minors mu - det + f)
    const double mu = select_convex_root(cubic_real_roots(1.0, -trace, minors, f - det));
    const double v = v0 + 0.5 * mu * h * h;
    SymMatrix<3> shifted = m;
    for (int d = 0; d < 3; ++d) shifted[d][d] -= mu;
    indefinite = !is_positive_definite(shifted);
    return v;
}

inline double updated_value(const LocalCoefficients2D& k, double v0, double f, double h, bool& indefinite) {
    const auto m = hessian_from(k, v0, h);
    const double trace = m[0][0] + m[1][1];
    const double mu = select_convex_root(quadratic_real_roots(1.0, -trace, determinant(m) - f));
    const double v = v0 + 0.5 * mu * h * h;
    SymMatrix<2> shifted = m;
    shifted[0][0] -= mu;
    shifted[1][1] -= mu;
    indefinite = !is_positive_definite(shifted);
    return v;
}

template <int Dim>
void relax_node(GridField<Dim>& u, const GridField<Dim>& rhs, std::size_t p, double h, SweepStats& stats) {
    const double v0 = u[p];
    bool indefinite = false;
    const double v = updated_value(gather(u, p), v0, rhs[p], h, indefinite);
    stats.max_update = std::max(stats.max_update, std::abs(v - v0));
    stats.indefinite_updates += indefinite ? 1 : 0;
    u[p] = v;
}

} // namespace detail

/// One nonlinear Gauss-Seidel sweep: every interior node is replaced, in place, by the
/// smallest real root of its local polynomial with the latest neighbor values frozen.
/// Boundary values are not touched.
template <int Dim>
SweepStats gauss_seidel_sweep(GridField<Dim>& u, const GridField<Dim>& rhs,
                              SweepOrdering ordering = SweepOrdering::Lexicographic) {
    validate_ordering<Dim>(ordering);
    const auto& g = u.geometry();
    if (!(rhs.geometry() == g)) throw DomainError("sweep operands live on different grids");
    const double h = g.h();
    const int m = g.n();
    SweepStats stats;

    if constexpr (Dim == 2) {
        const std::size_t sy = g.stride(1);
        if (ordering == SweepOrdering::Lexicographic) {
            for (int j = 1; j < m; ++j)
                for (int i = 1; i < m; ++i) detail::relax_node(u, rhs, i + sy * j, h, stats);
        } else {
            for (int color = 0; color < 2; ++color)
                for (int j = 1; j < m; ++j)
                    for (int i = 1 + ((j + 1 + color) & 1); i < m; i += 2) detail::relax_node(u, rhs, i + sy * j, h, stats);
        }
    } else {
        const std::size_t sy = g.stride(1), sz = g.stride(2);
        for (int k = 1; k < m; ++k)
            for (int j = 1; j < m; ++j)
                for (int i = 1; i < m; ++i) detail::relax_node(u, rhs, i + sy * j + sz * k, h, stats);
    }
    return stats;
}

/// Gauss-Seidel as a standalone solver: sweeps until ||r||/||r0|| <= tol or max_iters,
/// where r0 is the residual of the input field. Non-convergence is reported, not thrown.
template <int Dim>
SolveReport gauss_seidel_solve(GridField<Dim>& u, const GridField<Dim>& rhs, double tol, int max_iters,
                               SweepOrdering ordering = SweepOrdering::Lexicographic) {
    const auto start = std::chrono::steady_clock::now();
    SolveReport report;
    GridField<Dim> r(u.geometry());
    residual(u, rhs, r);
    const double baseline = interior_l2_norm(r);
    if (baseline == 0.0) {
        report.residual_history.push_back(0.0);
        report.converged = true;
    }
    while (!report.converged && report.cycles < max_iters) {
        report.indefinite_updates += gauss_seidel_sweep(u, rhs, ordering).indefinite_updates;
        ++report.cycles;
        residual(u, rhs, r);
        const double rel = interior_l2_norm(r) / baseline;
        report.residual_history.push_back(rel);
        report.converged = rel <= tol;
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace ma
