#pragma once

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace ma {

template <int Dim>
using Point = std::array<double, Dim>;

template <int Dim>
using Index = std::array<int, Dim>;

// Non-deduced spellings for function parameters; Dim is deduced from the grid argument.
template <int Dim>
using PointArg = std::type_identity_t<Point<Dim>>;

template <int Dim>
using IndexArg = std::type_identity_t<Index<Dim>>;

template <int Dim>
using PointFn = std::type_identity_t<std::function<double(const Point<Dim>&)>>;

/// Uniform node-centered grid over the box origin + [0, extent]^Dim.
///
/// Nodes are numbered 0..n along every axis; storage is lexicographic with the
/// x index fastest, i.e. flat = i + (n+1) * (j + (n+1) * k).
template <int Dim>
class GridGeometry {
    static_assert(Dim == 2 || Dim == 3, "only 2D and 3D grids are supported");

public:
    static constexpr int dim = Dim;

    explicit GridGeometry(int n, double extent = 1.0, Point<Dim> origin = {})
        : n_(n), extent_(extent), origin_(origin), h_(extent / n) {
        if (n < 2 || (n & (n - 1)) != 0)
            throw DomainError("grid size n must be a power of 2 and at least 2, got " + std::to_string(n));
        if (!(extent > 0.0) || !std::isfinite(extent))
            throw DomainError("grid extent must be positive and finite");
    }

    int n() const { return n_; }
    double extent() const { return extent_; }
    const Point<Dim>& origin() const { return origin_; }
    double h() const { return h_; }
    int nodes_per_axis() const { return n_ + 1; }

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < Dim; ++d) s *= static_cast<std::size_t>(n_ + 1);
        return s;
    }

    /// Distance in flat storage between neighbors along `axis`.
    std::size_t stride(int axis) const {
        std::size_t s = 1;
        for (int d = 0; d < axis; ++d) s *= static_cast<std::size_t>(n_ + 1);
        return s;
    }

    std::size_t flat(const Index<Dim>& idx) const {
        std::size_t f = 0;
        for (int d = Dim - 1; d >= 0; --d) f = f * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(idx[d]);
        return f;
    }

    Index<Dim> unflat(std::size_t f) const {
        Index<Dim> idx{};
        for (int d = 0; d < Dim; ++d) {
            idx[d] = static_cast<int>(f % static_cast<std::size_t>(n_ + 1));
            f /= static_cast<std::size_t>(n_ + 1);
        }
        return idx;
    }

    bool contains(const Index<Dim>& idx) const {
        return std::all_of(idx.begin(), idx.end(), [&](int i) { return i >= 0 && i <= n_; });
    }

    bool is_interior(const Index<Dim>& idx) const {
        return std::all_of(idx.begin(), idx.end(), [&](int i) { return i > 0 && i < n_; });
    }

    bool is_boundary(const Index<Dim>& idx) const { return contains(idx) && !is_interior(idx); }

    /// Same box with half as many cells per axis.
    GridGeometry coarsened() const { return GridGeometry(n_ / 2, extent_, origin_); }

    /// Same box with twice as many cells per axis.
    GridGeometry refined() const { return GridGeometry(n_ * 2, extent_, origin_); }

    friend bool operator==(const GridGeometry& a, const GridGeometry& b) {
        return a.n_ == b.n_ && a.extent_ == b.extent_ && a.origin_ == b.origin_;
    }

private:
    int n_;
    double extent_;
    Point<Dim> origin_;
    double h_;
};

template <int Dim>
Point<Dim> node_coordinate(const GridGeometry<Dim>& geom, const IndexArg<Dim>& idx) {
    if (!geom.contains(idx)) throw DomainError("node index outside the grid");
    Point<Dim> p{};
    for (int d = 0; d < Dim; ++d) {
        // the last node lands on origin + extent exactly
        p[d] = idx[d] == geom.n() ? geom.origin()[d] + geom.extent() : geom.origin()[d] + geom.h() * idx[d];
    }
    return p;
}

/// Visit every node index in storage order.
template <int Dim, typename F>
void for_each_node(const GridGeometry<Dim>& geom, F&& fn) {
    const int m = geom.n();
    if constexpr (Dim == 2) {
        for (int j = 0; j <= m; ++j)
            for (int i = 0; i <= m; ++i) fn(Index<2>{i, j});
    } else {
        for (int k = 0; k <= m; ++k)
            for (int j = 0; j <= m; ++j)
                for (int i = 0; i <= m; ++i) fn(Index<3>{i, j, k});
    }
}

/// Visit interior node indices (1..n-1 on every axis) in storage order.
template <int Dim, typename F>
void for_each_interior(const GridGeometry<Dim>& geom, F&& fn) {
    const int m = geom.n();
    if constexpr (Dim == 2) {
        for (int j = 1; j < m; ++j)
            for (int i = 1; i < m; ++i) fn(Index<2>{i, j});
    } else {
        for (int k = 1; k < m; ++k)
            for (int j = 1; j < m; ++j)
                for (int i = 1; i < m; ++i) fn(Index<3>{i, j, k});
    }
}

/// Visit boundary node indices in storage order.
template <int Dim, typename F>
void for_each_boundary(const GridGeometry<Dim>& geom, F&& fn) {
    for_each_node(geom, [&](const Index<Dim>& idx) {
        if (!geom.is_interior(idx)) fn(idx);
    });
}

/// Scalar nodal values on a GridGeometry.
template <int Dim>
class GridField {
public:
    explicit GridField(const GridGeometry<Dim>& geom, double fill = 0.0)
        : geom_(geom), values_(geom.size(), fill) {}

    const GridGeometry<Dim>& geometry() const { return geom_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t f) { return values_[f]; }
    double operator[](std::size_t f) const { return values_[f]; }

    double& at(const Index<Dim>& idx) { return values_[geom_.flat(idx)]; }
    double at(const Index<Dim>& idx) const { return values_[geom_.flat(idx)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    void fill(double v) { std::fill(values_.begin(), values_.end(), v); }

    void fill_interior(double v) {
        for_each_interior(geom_, [&](const Index<Dim>& idx) { at(idx) = v; });
    }

    GridField& operator*=(double s) {
        for (double& v : values_) v *= s;
        return *this;
    }

    bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

private:
    GridGeometry<Dim> geom_;
    std::vector<double> values_;
};

template <int Dim>
GridField<Dim> sample(const GridGeometry<Dim>& geom, const PointFn<Dim>& fn) {
    GridField<Dim> out(geom);
    for_each_node(geom, [&](const Index<Dim>& idx) { out.at(idx) = fn(node_coordinate(geom, idx)); });
    return out;
}

/// Unscaled Euclidean norm over interior nodes only.
template <int Dim>
double interior_l2_norm(const GridField<Dim>& field) {
    double sum = 0.0;
    for_each_interior(field.geometry(), [&](const Index<Dim>& idx) {
        const double v = field.at(idx);
        sum += v * v;
    });
    return std::sqrt(sum);
}

/// Largest absolute interior value.
template <int Dim>
double interior_max_norm(const GridField<Dim>& field) {
    double m = 0.0;
    for_each_interior(field.geometry(), [&](const Index<Dim>& idx) { m = std::max(m, std::abs(field.at(idx))); });
    return m;
}

/// max |approx - exact| over all nodes, boundary included.
template <int Dim>
double max_norm_error(const GridField<Dim>& approx, const PointFn<Dim>& exact) {
    const auto& geom = approx.geometry();
    double m = 0.0;
    for_each_node(geom, [&](const Index<Dim>& idx) {
        m = std::max(m, std::abs(approx.at(idx) - exact(node_coordinate(geom, idx))));
    });
    return m;
}

/// max |a - b| over all nodes of two fields on the same grid.
template <int Dim>
double max_abs_difference(const GridField<Dim>& a, const GridField<Dim>& b) {
    if (!(a.geometry() == b.geometry())) throw DomainError("fields live on different grids");
    double m = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) m = std::max(m, std::abs(a[f] - b[f]));
    return m;
}

// Field dump: one header line "# dim=D n=N extent=L origin=x,y[,z]" followed by
// one value per line in storage order, printed with 17 significant digits.

template <int Dim>
void write_field_csv(std::ostream& os, const GridField<Dim>& field) {
    const auto& g = field.geometry();
    os << "# dim=" << Dim << " n=" << g.n() << " extent=" << std::setprecision(17) << g.extent() << " origin=";
    for (int d = 0; d < Dim; ++d) os << (d ? "," : "") << g.origin()[d];
    os << '\n';
    for (double v : field.values()) os << v << '\n';
}

template <int Dim>
void write_field_csv(const std::string& path, const GridField<Dim>& field) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open dump file " + path);
    write_field_csv(os, field);
}

template <int Dim>
GridField<Dim> read_field_csv(std::istream& is) {
    std::string header;
    std::getline(is, header);
    int dim = 0, n = 0;
    double extent = 0.0;
    std::string origin_text;
    {
        std::istringstream hs(header);
        std::string tok;
        hs >> tok;
        if (tok != "#") throw DataError("field dump is missing its header line");
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const auto key = tok.substr(0, eq);
            const auto val = tok.substr(eq + 1);
            if (key == "dim") dim = std::stoi(val);
            else if (key == "n") n = std::stoi(val);
            else if (key == "extent") extent = std::stod(val);
            else if (key == "origin") origin_text = val;
        }
    }
    if (dim != Dim) throw DataError("field dump dimension mismatch");
    Point<Dim> origin{};
    {
        std::istringstream os(origin_text);
        std::string part;
        for (int d = 0; d < Dim && std::getline(os, part, ','); ++d) origin[d] = std::stod(part);
    }
    GridField<Dim> field(GridGeometry<Dim>(n, extent, origin));
    for (std::size_t f = 0; f < field.size(); ++f) {
        if (!(is >> field[f])) throw DataError("field dump truncated");
    }
    return field;
}

} // namespace ma
