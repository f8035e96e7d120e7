#pragma once

// Uniform norm bound, tail decay and translation modulus of a finite family.
//
// All integrals are reported as p-th powers (the form compared against eps^p).
// Translations are restricted to lattice vectors y = k*h; the reported
// translation modulus is the lattice modulus, not the continuum supremum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "compactkit/detail/parallel.hpp"
#include "compactkit/grid.hpp"

namespace compactkit {

/// h^n * sum of |v|^p over cells whose centre satisfies |centre| > R.
inline double tail_mass(const GridFunction& f, double R, double p) {
  detail::check_exponent(p);
  if (!(R >= 0.0)) throw Error(ErrorCode::invalid_argument, "tail radius must be >= 0");
  const Grid& g = f.grid();
  const double r2 = R * R;
  double s = 0.0;
  for_each_index(g.shape(), [&](const Index& idx, std::size_t off) {
    double d2 = 0.0;
    for (std::size_t a = 0; a < g.dim(); ++a) {
      double c = g.origin()[a] + (static_cast<double>(idx[a]) + 0.5) * g.spacing();
      d2 += c * c;
    }
    if (d2 > r2) s += detail::abs_pow(f[off], p);
  });
  return g.cell_volume() * s;
}

/// Integral over R^n of |f(x + k*h) - f(x)|^p with f extended by zero, so no
/// mass is clipped at the box boundary. Returns the p-th power.
inline double translation_defect(const GridFunction& f, const Index& k, double p) {
  detail::check_exponent(p);
  const Grid& g = f.grid();
  if (k.size() != g.dim()) throw Error(ErrorCode::dimension_error, "shift vector has wrong dimension");
  std::vector<std::size_t> ext(g.dim());
  Index lo(g.dim());
  bool zero = true;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    auto n = static_cast<std::int64_t>(g.shape()[a]);
    lo[a] = std::min<std::int64_t>(0, -k[a]);
    std::int64_t hi = std::max<std::int64_t>(n, n - k[a]);
    ext[a] = static_cast<std::size_t>(hi - lo[a]);
    zero = zero && k[a] == 0;
  }
  if (zero) return 0.0;
  double s = 0.0;
  Index x(g.dim()), xk(g.dim());
  for_each_index(ext, [&](const Index& e, std::size_t) {
    for (std::size_t a = 0; a < g.dim(); ++a) {
      x[a] = e[a] + lo[a];
      xk[a] = x[a] + k[a];
    }
    s += detail::abs_pow(f.at(xk) - f.at(x), p);
  });
  return g.cell_volume() * s;
}

/// Nonzero lattice vectors k with |k*h| <= rho (Euclidean), keeping one of
/// each {k, -k} pair: the zero-extended defect is symmetric under k -> -k.
inline std::vector<Index> lattice_shifts(std::size_t dim, double spacing, double rho, bool half = true) {
  std::vector<Index> out;
  if (!(rho >= spacing * (1.0 - 1e-12))) return out;
  const auto m = static_cast<std::int64_t>(std::floor(rho / spacing * (1.0 + 1e-12)));
  const double lim = rho * rho * (1.0 + 1e-12);
  std::vector<std::size_t> box(dim, static_cast<std::size_t>(2 * m + 1));
  for_each_index(box, [&](const Index& e, std::size_t) {
    Index k(dim);
    double n2 = 0.0;
    bool nonzero = false;
    for (std::size_t a = 0; a < dim; ++a) {
      k[a] = e[a] - m;
      n2 += static_cast<double>(k[a] * k[a]) * spacing * spacing;
      nonzero = nonzero || k[a] != 0;
    }
    if (!nonzero || n2 > lim) return;
    if (half) {
      // lexicographically positive representative
      for (std::size_t a = 0; a < dim; ++a) {
        if (k[a] > 0) break;
        if (k[a] < 0) return;
      }
    }
    out.push_back(std::move(k));
  });
  return out;
}

inline double euclidean_length(const Index& k, double spacing) {
  double n2 = 0.0;
  for (auto c : k) n2 += static_cast<double>(c * c);
  return std::sqrt(n2) * spacing;
}

/// Sup of translation_defect over lattice shifts with |k*h| <= rho, tabulated
/// at each entry of rho_grid (nondecreasing by construction).
inline std::vector<double> defect_profile(const GridFunction& f, double p, const std::vector<double>& rho_grid) {
  std::vector<double> prof(rho_grid.size(), 0.0);
  if (rho_grid.empty()) return prof;
  const Grid& g = f.grid();
  for (const auto& k : lattice_shifts(g.dim(), g.spacing(), rho_grid.back())) {
    const double len = euclidean_length(k, g.spacing());
    const double d = translation_defect(f, k, p);
    for (std::size_t j = 0; j < rho_grid.size(); ++j)
      if (len <= rho_grid[j] * (1.0 + 1e-12)) prof[j] = std::max(prof[j], d);
  }
  return prof;
}

struct ProfilePoint {
  double at = 0.0;        ///< R or rho
  double sup = 0.0;       ///< supremum over the family (p-th power)
  std::size_t argmax = 0; ///< member attaining it
};

struct ModuliReport {
  double p = 1.0;
  double epsilon = 0.0;
  double norm_bound = 0.0;
  std::vector<ProfilePoint> tail_profile;
  std::vector<ProfilePoint> translation_profile;
  std::optional<double> tail_radius;
  std::optional<double> translation_rho;
};

/// 16 log-spaced radii from h up to the box corner radius.
inline std::vector<double> default_r_grid(const Grid& g) {
  const double hi = g.corner_radius();
  const double lo = std::min(g.spacing(), hi);
  std::vector<double> r(16);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(r.size() - 1));
  r.back() = hi;
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

inline std::vector<double> default_rho_grid(const Grid& g) {
  const double h = g.spacing();
  return {h, 2 * h, 4 * h, 8 * h};
}

namespace detail {

inline void check_tabulation(const std::vector<double>& grid, const char* name, bool allow_zero) {
  if (grid.empty()) throw Error(ErrorCode::invalid_argument, std::string(name) + " must be nonempty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0 || (!allow_zero && grid[i] == 0.0))
      throw Error(ErrorCode::invalid_argument, std::string(name) + " entries must be finite and positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(ErrorCode::invalid_argument, std::string(name) + " must be strictly increasing");
  }
}

inline void check_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorCode::invalid_argument, "epsilon must be a positive finite real");
}

}  // namespace detail

inline ModuliReport family_moduli(const FunctionFamily& F, double p, double eps, const std::vector<double>& r_grid,
                                  const std::vector<double>& rho_grid) {
  detail::check_exponent(p);
  detail::check_epsilon(eps);
  detail::check_tabulation(r_grid, "R grid", true);
  detail::check_tabulation(rho_grid, "rho grid", false);
  if (F.size() == 0) throw Error(ErrorCode::empty_family, "family has no members");

  const std::size_t m = F.size();
  std::vector<double> norms(m);
  std::vector<std::vector<double>> tails(m), defects(m);
  detail::parallel_for(m, [&](std::size_t i) {
    norms[i] = lp_norm(F[i], p);
    tails[i].resize(r_grid.size());
    for (std::size_t j = 0; j < r_grid.size(); ++j) tails[i][j] = tail_mass(F[i], r_grid[j], p);
    defects[i] = defect_profile(F[i], p, rho_grid);
  });

  ModuliReport rep;
  rep.p = p;
  rep.epsilon = eps;
  rep.norm_bound = *std::max_element(norms.begin(), norms.end());
  auto sup_over = [&](const std::vector<std::vector<double>>& table, std::size_t j, double at) {
    ProfilePoint pt{at, table[0][j], 0};
    for (std::size_t i = 1; i < m; ++i)
      if (table[i][j] > pt.sup) pt = {at, table[i][j], i};
    return pt;
  };
  const double target = std::pow(eps, p);
  for (std::size_t j = 0; j < r_grid.size(); ++j) {
    rep.tail_profile.push_back(sup_over(tails, j, r_grid[j]));
    if (!rep.tail_radius && rep.tail_profile.back().sup < target) rep.tail_radius = r_grid[j];
  }
  for (std::size_t j = 0; j < rho_grid.size(); ++j) {
    rep.translation_profile.push_back(sup_over(defects, j, rho_grid[j]));
    if (rep.translation_profile.back().sup < target) rep.translation_rho = rho_grid[j];
  }
  return rep;
}

inline ModuliReport family_moduli(const FunctionFamily& F, double p, double eps) {
  return family_moduli(F, p, eps, default_r_grid(F.grid()), default_rho_grid(F.grid()));
}

struct SequenceCondition {
  double rho = 0.0;
  std::size_t head_count = 0;  ///< members 0..head_count-1 handled by the shrinking step
};

/// Two-stage translation condition for a sequence: first find the shortest
/// head N and a rho0 so that every member past the head has lattice defect
/// < eps^p for |y| <= rho0, then shrink rho <= rho0 until the head members
/// satisfy it as well.
inline SequenceCondition sequence_condition(const FunctionFamily& F, double p, double eps,
                                            const std::vector<double>& rho_grid) {
  detail::check_exponent(p);
  detail::check_epsilon(eps);
  detail::check_tabulation(rho_grid, "rho grid", false);
  const std::size_t m = F.size();
  const double target = std::pow(eps, p);
  std::vector<std::vector<double>> prof(m);
  detail::parallel_for(m, [&](std::size_t i) { prof[i] = defect_profile(F[i], p, rho_grid); });

  // largest j <= max_j at which members [from, to) all have defect < target
  auto largest_ok = [&](std::size_t from, std::size_t to, std::size_t max_j) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j <= max_j; ++j) {
      bool ok = true;
      for (std::size_t i = from; i < to && ok; ++i) ok = prof[i][j] < target;
      if (ok) best = j;
    }
    return best;
  };

  for (std::size_t head = 0; head <= m; ++head) {
    auto rho0 = largest_ok(head, m, rho_grid.size() - 1);
    if (!rho0) continue;
    auto rho = largest_ok(0, head, *rho0);
    if (!rho) break;  // a longer head only adds constraints
    return {rho_grid[*rho], head};
  }
  throw Error(ErrorCode::not_certifiable,
              "no tabulated rho makes every head member's translation defect < eps^p");
}

}  // namespace compactkit
