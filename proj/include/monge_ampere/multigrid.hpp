#pragma once

#include "discretization.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "problems.hpp"
#include "smoother.hpp"
#include "transfer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ma {

enum class SolverMode { FmgFas, FasOnly, GaussSeidel };

/// How the coarse-level starting value u_H of a V-cycle is obtained from the fine
/// iterate. The coarse reference w_H always uses injection.
enum class CoarseGuess { HalfWeight, Injection };

struct SolverConfig {
    int nu1 = 2;           ///< pre-smoothing sweeps
    int nu2 = 2;           ///< post-smoothing sweeps
    int coarsest_n = 2;    ///< cells per axis on the coarsest level
    int coarse_sweeps = 1; ///< sweeps standing in for a coarsest-level solve
    double tol = 1e-6;     ///< target ||r||_2 / ||r0||_2
    int max_cycles = 50;   ///< extra V-cycles allowed after the FMG pass
    int max_gs_iters = 100000;
    SweepOrdering ordering = SweepOrdering::Lexicographic;
    SolverMode mode = SolverMode::FmgFas;
    CoarseGuess coarse_guess = CoarseGuess::Injection;

    void validate() const {
        if (nu1 < 0 || nu2 < 0 || nu1 + nu2 < 1) throw ConfigError("need nu1, nu2 >= 0 and nu1 + nu2 >= 1");
        if (coarsest_n < 2 || (coarsest_n & (coarsest_n - 1)) != 0)
            throw ConfigError("coarsest_n must be a power of 2 and at least 2");
        if (coarse_sweeps < 1) throw ConfigError("coarse_sweeps must be at least 1");
        if (!(tol > 0.0)) throw ConfigError("tol must be positive");
        if (max_cycles < 0) throw ConfigError("max_cycles must be non-negative");
        if (max_gs_iters < 1) throw ConfigError("max_gs_iters must be at least 1");
    }
};

/// Grids from the finest n down to coarsest_n, each with preallocated work fields.
template <int Dim>
class LevelHierarchy {
public:
    struct Level {
        GridGeometry<Dim> geometry;
        GridField<Dim> u;        ///< current iterate
        GridField<Dim> rhs;      ///< right-hand side at this level
        GridField<Dim> injected; ///< injected fine iterate (w_H)
        GridField<Dim> scratch;  ///< residual / correction work space

        explicit Level(const GridGeometry<Dim>& g) : geometry(g), u(g), rhs(g), injected(g), scratch(g) {}
    };

    LevelHierarchy(const GridGeometry<Dim>& finest, int coarsest_n) {
        if (finest.n() < coarsest_n)
            throw ConfigError("grid size " + std::to_string(finest.n()) + " is below coarsest_n " +
                              std::to_string(coarsest_n));
        GridGeometry<Dim> g = finest;
        levels_.emplace_back(g);
        while (g.n() > coarsest_n) {
            g = g.coarsened();
            levels_.emplace_back(g);
        }
    }

    std::size_t depth() const { return levels_.size(); }
    bool is_coarsest(std::size_t l) const { return l + 1 == levels_.size(); }
    Level& operator[](std::size_t l) { return levels_[l]; }
    const Level& operator[](std::size_t l) const { return levels_[l]; }

private:
    std::vector<Level> levels_;
};

namespace detail {

template <int Dim>
void smooth(GridField<Dim>& u, const GridField<Dim>& rhs, int sweeps, SweepOrdering ordering, SweepStats& acc) {
    for (int s = 0; s < sweeps; ++s) {
        const SweepStats st = gauss_seidel_sweep(u, rhs, ordering);
        acc.indefinite_updates += st.indefinite_updates;
        acc.max_update = std::max(acc.max_update, st.max_update);
    }
}

template <int Dim>
void copy_values(const GridField<Dim>& from, GridField<Dim>& to) {
    std::copy(from.values().begin(), from.values().end(), to.values().begin());
}

} // namespace detail

/// One FAS V-cycle on level l of the hierarchy, acting on H[l].u with right-hand side H[l].rhs.
template <int Dim>
void fas_vcycle(LevelHierarchy<Dim>& H, std::size_t l, const SolverConfig& cfg, SweepStats& stats) {
    auto& fine = H[l];
    if (H.is_coarsest(l)) {
        detail::smooth(fine.u, fine.rhs, cfg.coarse_sweeps, cfg.ordering, stats);
        return;
    }
    auto& coarse = H[l + 1];

    detail::smooth(fine.u, fine.rhs, cfg.nu1, cfg.ordering, stats);

    // r_H = I (b_h - S_h(w_h))
    residual(fine.u, fine.rhs, fine.scratch);
    restrict_halfweight(fine.scratch, coarse.scratch);

    // w_H by injection; u_H by half-weighting (boundary taken from the injection) or injection
    restrict_inject(fine.u, coarse.injected);
    if (cfg.coarse_guess == CoarseGuess::HalfWeight) {
        restrict_halfweight(fine.u, coarse.u);
        for_each_boundary(coarse.geometry, [&](const Index<Dim>& idx) { coarse.u.at(idx) = coarse.injected.at(idx); });
    } else {
        detail::copy_values(coarse.injected, coarse.u);
    }

    // b_H = S_H(w_H) + r_H
    apply_operator(coarse.injected, coarse.rhs);
    for (std::size_t p = 0; p < coarse.rhs.size(); ++p) coarse.rhs[p] += coarse.scratch[p];

    fas_vcycle(H, l + 1, cfg, stats);

    // w_h += I (u_H - w_H)
    for (std::size_t p = 0; p < coarse.scratch.size(); ++p) coarse.scratch[p] = coarse.u[p] - coarse.injected[p];
    prolong_linear(coarse.scratch, fine.scratch);
    for_each_interior(fine.geometry, [&](const Index<Dim>& idx) { fine.u.at(idx) += fine.scratch.at(idx); });

    detail::smooth(fine.u, fine.rhs, cfg.nu2, cfg.ordering, stats);
}

/// Convenience form: one V-cycle on a standalone field/rhs pair.
template <int Dim>
GridField<Dim> fas_vcycle(const GridField<Dim>& field, const GridField<Dim>& rhs, const SolverConfig& cfg) {
    cfg.validate();
    validate_ordering<Dim>(cfg.ordering);
    LevelHierarchy<Dim> H(field.geometry(), cfg.coarsest_n);
    detail::copy_values(field, H[0].u);
    detail::copy_values(rhs, H[0].rhs);
    SweepStats stats;
    fas_vcycle(H, 0, cfg, stats);
    return H[0].u;
}

/// Nested iteration: inject the rhs downward, start from a zero interior on the
/// coarsest level, then cubic-interpolate upward with one V-cycle per level.
/// H[l].rhs must hold the right-hand side on entry.
template <int Dim>
void fmg_cycle(const Problem<Dim>& problem, LevelHierarchy<Dim>& H, std::size_t l, const SolverConfig& cfg,
               SweepStats& stats) {
    auto& level = H[l];
    if (H.is_coarsest(l)) {
        level.u.fill(0.0);
        apply_boundary(problem, level.u);
        detail::smooth(level.u, level.rhs, cfg.coarse_sweeps, cfg.ordering, stats);
        return;
    }
    restrict_inject(level.rhs, H[l + 1].rhs);
    fmg_cycle(problem, H, l + 1, cfg, stats);
    prolong_cubic(H[l + 1].u, level.u);
    apply_boundary(problem, level.u);
    fas_vcycle(H, l, cfg, stats);
}

/// ||rhs - S_h(field)||_2 / baseline; a zero baseline means the problem was already solved.
template <int Dim>
double relative_residual(const GridField<Dim>& field, const GridField<Dim>& rhs, double baseline_norm) {
    if (baseline_norm < 0.0) throw DomainError("baseline residual norm must be non-negative");
    if (baseline_norm == 0.0) return 0.0;
    return interior_l2_norm(residual(field, rhs)) / baseline_norm;
}

template <int Dim>
struct SolveResult {
    GridField<Dim> field;
    SolveReport report;
};

/// Solve det(D^2 u) = rhs with the problem's boundary data using the configured mode.
/// The stopping baseline r0 is the residual of the zero-interior field for the
/// multigrid modes, and of the initial guess for the Gauss-Seidel mode.
template <int Dim>
SolveResult<Dim> solve_with_rhs(const Problem<Dim>& problem, const GridField<Dim>& rhs, const SolverConfig& cfg) {
    cfg.validate();
    validate_ordering<Dim>(cfg.ordering);
    const auto& geom = rhs.geometry();
    SolveReport report;

    if (cfg.mode == SolverMode::GaussSeidel) {
        GridField<Dim> u(geom);
        if (problem.exact) {
            u = sample_exact(problem, geom);
            u *= 1.01;
        }
        apply_boundary(problem, u);
        report = gauss_seidel_solve(u, rhs, cfg.tol, cfg.max_gs_iters, cfg.ordering);
        if (problem.exact) report.error_max = max_norm_error(u, *problem.exact);
        return {std::move(u), std::move(report)};
    }

    LevelHierarchy<Dim> H(geom, cfg.coarsest_n);
    auto& top = H[0];
    detail::copy_values(rhs, top.rhs);
    top.u.fill(0.0);
    apply_boundary(problem, top.u);
    const double baseline = interior_l2_norm(residual(top.u, top.rhs));

    const auto start = std::chrono::steady_clock::now();
    SweepStats stats;
    auto record = [&] {
        const double rel = relative_residual(top.u, top.rhs, baseline);
        report.residual_history.push_back(rel);
        return rel <= cfg.tol;
    };

    bool done = false;
    if (cfg.mode == SolverMode::FmgFas) {
        fmg_cycle(problem, H, 0, cfg, stats);
        report.cycles = 1;
        done = record();
        while (!done && report.cycles - 1 < cfg.max_cycles) {
            fas_vcycle(H, 0, cfg, stats);
            ++report.cycles;
            done = record();
        }
    } else {
        while (!done && report.cycles < std::max(cfg.max_cycles, 1)) {
            fas_vcycle(H, 0, cfg, stats);
            ++report.cycles;
            done = record();
        }
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.converged = done;
    report.indefinite_updates = stats.indefinite_updates;
    if (problem.exact) report.error_max = max_norm_error(top.u, *problem.exact);
    return {std::move(top.u), std::move(report)};
}

/// Sample f on the n-cell grid of the problem's box and solve.
template <int Dim>
SolveResult<Dim> solve(const Problem<Dim>& problem, int n, const SolverConfig& cfg) {
    const auto geom = problem.geometry(n);
    return solve_with_rhs(problem, sample_source(problem, geom), cfg);
}

/// FMG pass followed by V-cycles until the relative residual reaches cfg.tol.
template <int Dim>
SolveResult<Dim> fmg_solve(const Problem<Dim>& problem, int n, SolverConfig cfg) {
    cfg.mode = SolverMode::FmgFas;
    return solve(problem, n, cfg);
}

/// log2(Error(2h) / Error(h)) for consecutive entries of (n, error); n must double.
inline std::vector<double> estimate_order(const std::vector<std::pair<int, double>>& errors) {
    std::vector<double> orders;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (errors[i].first != 2 * errors[i - 1].first)
            throw DomainError("order estimation needs grid sizes that double from entry to entry");
        orders.push_back(std::log2(errors[i - 1].second / errors[i].second));
    }
    return orders;
}

} // namespace ma
