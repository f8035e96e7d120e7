#pragma once

// Piecewise-constant grid functions on a uniform box in R^n, extended by zero.
// Every L^p integral over such a function is a finite sum, so norms, distances
// and the scaling law hold exactly up to floating-point rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compactkit/error.hpp"

namespace compactkit {

using Index = std::vector<std::int64_t>;

/// Uniform grid: `shape[a]` cells along axis a, low corner `origin`, cell side `spacing`.
class Grid {
 public:
  Grid() = default;

  Grid(std::vector<std::size_t> shape, std::vector<double> origin, double spacing)
      : shape_(std::move(shape)), origin_(std::move(origin)), spacing_(spacing) {
    if (shape_.empty()) throw Error(ErrorCode::shape_error, "grid dimension must be positive");
    if (origin_.size() != shape_.size())
      throw Error(ErrorCode::shape_error, "origin has " + std::to_string(origin_.size()) +
                                              " entries, expected " + std::to_string(shape_.size()));
    if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
      throw Error(ErrorCode::invalid_argument, "spacing must be a positive finite real");
    for (auto s : shape_)
      if (s == 0) throw Error(ErrorCode::shape_error, "every shape entry must be >= 1");
    for (auto o : origin_)
      if (!std::isfinite(o)) throw Error(ErrorCode::non_finite_value, "origin must be finite");
  }

  std::size_t dim() const noexcept { return shape_.size(); }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  const std::vector<double>& origin() const noexcept { return origin_; }
  double spacing() const noexcept { return spacing_; }

  std::size_t size() const noexcept {
    return std::accumulate(shape_.begin(), shape_.end(), std::size_t{1}, std::multiplies<>());
  }

  /// h^n
  double cell_volume() const noexcept { return std::pow(spacing_, static_cast<double>(dim())); }

  /// Row-major strides, last axis fastest.
  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> st(dim(), 1);
    for (std::size_t a = dim(); a-- > 1;) st[a - 1] = st[a] * shape_[a];
    return st;
  }

  bool contains(const Index& idx) const noexcept {
    for (std::size_t a = 0; a < dim(); ++a)
      if (idx[a] < 0 || idx[a] >= static_cast<std::int64_t>(shape_[a])) return false;
    return true;
  }

  std::size_t flat(const Index& idx) const noexcept {
    std::size_t off = 0;
    for (std::size_t a = 0; a < dim(); ++a) off = off * shape_[a] + static_cast<std::size_t>(idx[a]);
    return off;
  }

  Index unflat(std::size_t off) const {
    Index idx(dim());
    for (std::size_t a = dim(); a-- > 0;) {
      idx[a] = static_cast<std::int64_t>(off % shape_[a]);
      off /= shape_[a];
    }
    return idx;
  }

  std::vector<double> cell_center(const Index& idx) const {
    std::vector<double> c(dim());
    for (std::size_t a = 0; a < dim(); ++a)
      c[a] = origin_[a] + (static_cast<double>(idx[a]) + 0.5) * spacing_;
    return c;
  }

  /// Largest Euclidean distance from the coordinate origin to a box corner.
  double corner_radius() const {
    double sq = 0.0;
    for (std::size_t a = 0; a < dim(); ++a) {
      double lo = origin_[a];
      double hi = origin_[a] + static_cast<double>(shape_[a]) * spacing_;
      double m = std::max(std::abs(lo), std::abs(hi));
      sq += m * m;
    }
    return std::sqrt(sq);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> origin_;
  double spacing_ = 1.0;
};

/// Visits every multi-index of `shape` in row-major order.
template <class Fn>
void for_each_index(const std::vector<std::size_t>& shape, Fn&& fn) {
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (total == 0) return;
  Index idx(shape.size(), 0);
  for (std::size_t off = 0; off < total; ++off) {
    fn(static_cast<const Index&>(idx), off);
    for (std::size_t a = shape.size(); a-- > 0;) {
      if (++idx[a] < static_cast<std::int64_t>(shape[a])) break;
      idx[a] = 0;
    }
  }
}

/// Step function on a Grid. Values are immutable after construction and finite.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw Error(ErrorCode::size_mismatch, "got " + std::to_string(values_.size()) + " values for " +
                                                std::to_string(grid_.size()) + " cells");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw Error(ErrorCode::non_finite_value, "value at flat index " + std::to_string(i) + " is not finite");
  }

  static GridFunction zeros(const Grid& grid) { return GridFunction(grid, std::vector<double>(grid.size(), 0.0)); }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Value at a possibly out-of-box multi-index; zero outside the box.
  double at(const Index& idx) const noexcept { return grid_.contains(idx) ? values_[grid_.flat(idx)] : 0.0; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Nonempty ordered collection of grid-compatible members.
class FunctionFamily {
 public:
  FunctionFamily() = default;

  FunctionFamily(std::vector<GridFunction> members, std::vector<std::string> labels = {})
      : members_(std::move(members)), labels_(std::move(labels)) {
    if (members_.empty()) throw Error(ErrorCode::empty_family, "family has no members");
    if (labels_.empty())
      for (std::size_t i = 0; i < members_.size(); ++i) labels_.push_back("f" + std::to_string(i));
    if (labels_.size() != members_.size())
      throw Error(ErrorCode::invalid_argument, "label count does not match member count");
    for (std::size_t i = 1; i < members_.size(); ++i)
      if (!(members_[i].grid() == members_[0].grid()))
        throw Error(ErrorCode::grid_mismatch, "member '" + labels_[i] + "' is not on the family grid");
  }

  std::size_t size() const noexcept { return members_.size(); }
  const Grid& grid() const noexcept { return members_.front().grid(); }
  const GridFunction& operator[](std::size_t i) const noexcept { return members_[i]; }
  const std::vector<GridFunction>& members() const noexcept { return members_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const noexcept { return labels_[i]; }

 private:
  std::vector<GridFunction> members_;
  std::vector<std::string> labels_;
};

namespace detail {

inline void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error(ErrorCode::invalid_exponent, "exponent p must satisfy 1 <= p < inf, got " + std::to_string(p));
}

inline double abs_pow(double x, double p) {
  double a = std::abs(x);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

inline double root(double s, double p) {
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

inline void check_compatible(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) throw Error(ErrorCode::grid_mismatch, "grid functions live on different grids");
}

}  // namespace detail

/// h^n * sum |v|^p, i.e. the p-th power of the L^p norm.
inline double lp_norm_pow(std::span<const double> values, double cell_volume, double p) {
  detail::check_exponent(p);
  double s = 0.0;
  for (double v : values) s += detail::abs_pow(v, p);
  return cell_volume * s;
}

inline double lp_norm(const GridFunction& f, double p) {
  return detail::root(lp_norm_pow(f.values(), f.grid().cell_volume(), p), p);
}

inline double lp_distance(const GridFunction& f, const GridFunction& g, double p) {
  detail::check_exponent(p);
  detail::check_compatible(f, g);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += detail::abs_pow(f[i] - g[i], p);
  return detail::root(f.grid().cell_volume() * s, p);
}

/// sup-norm distance over cells
inline double sup_distance(const GridFunction& f, const GridFunction& g) {
  detail::check_compatible(f, g);
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

inline GridFunction scaled(const GridFunction& f, double c) {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (auto& x : v) x *= c;
  return GridFunction(f.grid(), std::move(v));
}

/// a*f + b*g on a shared grid.
inline GridFunction combine(double a, const GridFunction& f, double b, const GridFunction& g) {
  detail::check_compatible(f, g);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = a * f[i] + b * g[i];
  return GridFunction(f.grid(), std::move(v));
}

/// Lattice translation by y = k*h: result(x) = f(x + k*h), zero where the
/// source cell is outside the box. Mass shifted out of the box is dropped.
inline GridFunction shift(const GridFunction& f, const Index& k) {
  const Grid& g = f.grid();
  if (k.size() != g.dim()) throw Error(ErrorCode::dimension_error, "shift vector has wrong dimension");
  std::vector<double> out(g.size(), 0.0);
  Index src(g.dim());
  for_each_index(g.shape(), [&](const Index& idx, std::size_t off) {
    for (std::size_t a = 0; a < g.dim(); ++a) src[a] = idx[a] + k[a];
    out[off] = f.at(src);
  });
  return GridFunction(g, std::move(out));
}

/// f^lambda(x) = f(x / lambda) by cell replication: each cell becomes lambda^n
/// cells of the same spacing, and the origin scales by lambda.
inline GridFunction rescale(const GridFunction& f, std::size_t lambda) {
  if (lambda == 0) throw Error(ErrorCode::invalid_argument, "rescale factor must be >= 1");
  const Grid& g = f.grid();
  std::vector<std::size_t> shape(g.shape());
  std::vector<double> origin(g.origin());
  for (std::size_t a = 0; a < g.dim(); ++a) {
    shape[a] *= lambda;
    origin[a] *= static_cast<double>(lambda);
  }
  Grid big(shape, origin, g.spacing());
  std::vector<double> out(big.size());
  Index src(g.dim());
  const auto lam = static_cast<std::int64_t>(lambda);
  for_each_index(shape, [&](const Index& idx, std::size_t off) {
    for (std::size_t a = 0; a < g.dim(); ++a) src[a] = idx[a] / lam;
    out[off] = f[g.flat(src)];
  });
  return GridFunction(std::move(big), std::move(out));
}

/// Grid enlarged by `lo[a]` cells below and `hi[a]` cells above along each axis.
inline Grid padded_grid(const Grid& g, const std::vector<std::size_t>& lo, const std::vector<std::size_t>& hi) {
  std::vector<std::size_t> shape(g.shape());
  std::vector<double> origin(g.origin());
  for (std::size_t a = 0; a < g.dim(); ++a) {
    shape[a] += lo[a] + hi[a];
    origin[a] -= static_cast<double>(lo[a]) * g.spacing();
  }
  return Grid(std::move(shape), std::move(origin), g.spacing());
}

/// Copies f into a padded grid produced by padded_grid(f.grid(), lo, hi).
inline GridFunction embed(const GridFunction& f, const std::vector<std::size_t>& lo, const std::vector<std::size_t>& hi) {
  Grid big = padded_grid(f.grid(), lo, hi);
  std::vector<double> out(big.size(), 0.0);
  Index dst(f.grid().dim());
  for_each_index(f.grid().shape(), [&](const Index& idx, std::size_t off) {
    for (std::size_t a = 0; a < idx.size(); ++a) dst[a] = idx[a] + static_cast<std::int64_t>(lo[a]);
    out[big.flat(dst)] = f[off];
  });
  return GridFunction(std::move(big), std::move(out));
}

}  // namespace compactkit
