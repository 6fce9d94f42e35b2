#pragma once

#include "errors.hpp"
#include "grid.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

namespace ma {

/// A fine grid and its factor-2 coarsening over the same box.
template <int Dim>
struct LevelPair {
    GridGeometry<Dim> fine;
    GridGeometry<Dim> coarse;

    LevelPair(const GridGeometry<Dim>& fine_geom, const GridGeometry<Dim>& coarse_geom)
        : fine(fine_geom), coarse(coarse_geom) {
        if (coarse.n() * 2 != fine.n() || coarse.extent() != fine.extent() || coarse.origin() != fine.origin())
            throw DomainError("grids do not form a factor-2 level pair");
    }

    explicit LevelPair(const GridGeometry<Dim>& fine_geom) : LevelPair(fine_geom, fine_geom.coarsened()) {}
};

namespace detail {

template <int Dim>
void check_pair(const GridField<Dim>& fine, const GridField<Dim>& coarse) {
    LevelPair<Dim> pair(fine.geometry(), coarse.geometry());
    (void)pair;
}

// 1D interpolation stencil for one fine index: up to four coarse indices with weights.
struct Stencil1D {
    std::array<int, 4> index{};
    std::array<double, 4> weight{};
    int size = 0;
};

inline Stencil1D linear_stencil(int fine_i) {
    Stencil1D s;
    if (fine_i % 2 == 0) {
        s.index[0] = fine_i / 2;
        s.weight[0] = 1.0;
        s.size = 1;
    } else {
        s.index = {fine_i / 2, fine_i / 2 + 1, 0, 0};
        s.weight = {0.5, 0.5, 0.0, 0.0};
        s.size = 2;
    }
    return s;
}

// 4-point Lagrange interpolation at coarse coordinate fine_i / 2. Centered where
// possible, shifted one-sided next to the boundary. Needs coarse_n >= 3.
inline Stencil1D cubic_stencil(int fine_i, int coarse_n) {
    if (fine_i % 2 == 0) return linear_stencil(fine_i);
    const double x = 0.5 * fine_i;
    const int left = fine_i / 2;
    const int first = std::clamp(left - 1, 0, coarse_n - 3);
    Stencil1D s;
    s.size = 4;
    for (int a = 0; a < 4; ++a) {
        s.index[a] = first + a;
        double w = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (b != a) w *= (x - (first + b)) / static_cast<double>(a - b);
        }
        s.weight[a] = w;
    }
    return s;
}

template <int Dim>
void tensor_interpolate(const GridField<Dim>& coarse, GridField<Dim>& fine, const std::vector<Stencil1D>& st) {
    const auto& cg = coarse.geometry();
    for_each_node(fine.geometry(), [&](const Index<Dim>& idx) {
        double v = 0.0;
        const Stencil1D& sx = st[idx[0]];
        const Stencil1D& sy = st[idx[1]];
        if constexpr (Dim == 2) {
            for (int b = 0; b < sy.size; ++b)
                for (int a = 0; a < sx.size; ++a)
                    v += sx.weight[a] * sy.weight[b] * coarse.at({sx.index[a], sy.index[b]});
        } else {
            const Stencil1D& sz = st[idx[2]];
            for (int c = 0; c < sz.size; ++c)
                for (int b = 0; b < sy.size; ++b)
                    for (int a = 0; a < sx.size; ++a)
                        v += sx.weight[a] * sy.weight[b] * sz.weight[c] *
                             coarse[cg.flat({sx.index[a], sy.index[b], sz.index[c]})];
        }
        fine.at(idx) = v;
    });
}

} // namespace detail

/// Half-weighting: coarse interior value = (2*Dim * center + sum of the 2*Dim fine face
/// neighbors) / (4*Dim), i.e. weights 6/12 and 1/12 in 3D, 4/8 and 1/8 in 2D.
/// Coarse boundary values are set to 0 (the operator is meant for residuals).
template <int Dim>
void restrict_halfweight(const GridField<Dim>& fine, GridField<Dim>& coarse) {
    detail::check_pair(fine, coarse);
    const auto& fg = fine.geometry();
    coarse.fill(0.0);
    const double center_w = 0.5, face_w = 1.0 / (4.0 * Dim);
    for_each_interior(coarse.geometry(), [&](const Index<Dim>& c) {
        Index<Dim> f;
        for (int d = 0; d < Dim; ++d) f[d] = 2 * c[d];
        const std::size_t p = fg.flat(f);
        double faces = 0.0;
        for (int d = 0; d < Dim; ++d) faces += fine[p + fg.stride(d)] + fine[p - fg.stride(d)];
        coarse.at(c) = center_w * fine[p] + face_w * faces;
    });
}

template <int Dim>
GridField<Dim> restrict_halfweight(const GridField<Dim>& fine, const LevelPair<Dim>& pair) {
    if (!(fine.geometry() == pair.fine)) throw DomainError("field does not live on the pair's fine grid");
    GridField<Dim> coarse(pair.coarse);
    restrict_halfweight(fine, coarse);
    return coarse;
}

/// Straight injection at coincident nodes, boundary included.
template <int Dim>
void restrict_inject(const GridField<Dim>& fine, GridField<Dim>& coarse) {
    detail::check_pair(fine, coarse);
    for_each_node(coarse.geometry(), [&](const Index<Dim>& c) {
        Index<Dim> f;
        for (int d = 0; d < Dim; ++d) f[d] = 2 * c[d];
        coarse.at(c) = fine.at(f);
    });
}

template <int Dim>
GridField<Dim> restrict_inject(const GridField<Dim>& fine, const LevelPair<Dim>& pair) {
    if (!(fine.geometry() == pair.fine)) throw DomainError("field does not live on the pair's fine grid");
    GridField<Dim> coarse(pair.coarse);
    restrict_inject(fine, coarse);
    return coarse;
}

/// Bilinear (2D) / trilinear (3D) interpolation to every fine node.
template <int Dim>
void prolong_linear(const GridField<Dim>& coarse, GridField<Dim>& fine) {
    detail::check_pair(fine, coarse);
    std::vector<detail::Stencil1D> st(fine.geometry().n() + 1);
    for (int i = 0; i <= fine.geometry().n(); ++i) st[i] = detail::linear_stencil(i);
    detail::tensor_interpolate(coarse, fine, st);
}

template <int Dim>
GridField<Dim> prolong_linear(const GridField<Dim>& coarse, const LevelPair<Dim>& pair) {
    if (!(coarse.geometry() == pair.coarse)) throw DomainError("field does not live on the pair's coarse grid");
    GridField<Dim> fine(pair.fine);
    prolong_linear(coarse, fine);
    return fine;
}

/// Tensor-product 4-point Lagrange interpolation. Falls back to linear when the
/// coarse grid has only 2 cells per axis.
template <int Dim>
void prolong_cubic(const GridField<Dim>& coarse, GridField<Dim>& fine) {
    detail::check_pair(fine, coarse);
    const int cn = coarse.geometry().n();
    if (cn < 4) {
        prolong_linear(coarse, fine);
        return;
    }
    std::vector<detail::Stencil1D> st(fine.geometry().n() + 1);
    for (int i = 0; i <= fine.geometry().n(); ++i) st[i] = detail::cubic_stencil(i, cn);
    detail::tensor_interpolate(coarse, fine, st);
}

template <int Dim>
GridField<Dim> prolong_cubic(const GridField<Dim>& coarse, const LevelPair<Dim>& pair) {
    if (!(coarse.geometry() == pair.coarse)) throw DomainError("field does not live on the pair's coarse grid");
    GridField<Dim> fine(pair.fine);
    prolong_cubic(coarse, fine);
    return fine;
}

} // namespace ma
