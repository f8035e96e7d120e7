#pragma once

// Cube-average projection and the eps-cover pipeline for families in L^p(R^n).
//
// Given a tail radius R and a translation radius rho at which the family's
// moduli are below eps^p, the cubes of side s*h (s*h*sqrt(n) < rho) tiling the
// ball of radius R define a finite-rank projection P with
//   ||f - Pf||_p < (2^n + 1)^{1/p} eps
// for every member. A greedy eps-net on the coefficient vectors of Pf pulls
// back to a cover of the family; the cover is always re-verified directly.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compactkit/cover.hpp"
#include "compactkit/detail/parallel.hpp"
#include "compactkit/grid.hpp"
#include "compactkit/moduli.hpp"

namespace compactkit {

/// Axis-aligned array of cubes measured in cells of the underlying grid.
/// Cube (j_0..j_{n-1}) covers cells [low_cell[a] + j_a*s, low_cell[a] + (j_a+1)*s).
struct CubeTiling {
  std::size_t side_cells = 1;
  Index low_cell;
  std::vector<std::size_t> count_per_axis;

  std::size_t dim() const noexcept { return low_cell.size(); }

  std::size_t cube_count() const noexcept {
    std::size_t c = 1;
    for (auto n : count_per_axis) c *= n;
    return count_per_axis.empty() ? 0 : c;
  }

  /// Cube index containing cell `idx`, or nullopt when the cell is untiled.
  std::optional<std::size_t> cube_of(const Index& idx) const {
    std::size_t off = 0;
    const auto s = static_cast<std::int64_t>(side_cells);
    for (std::size_t a = 0; a < dim(); ++a) {
      const std::int64_t rel = idx[a] - low_cell[a];
      if (rel < 0) return std::nullopt;
      const std::int64_t j = rel / s;
      if (j >= static_cast<std::int64_t>(count_per_axis[a])) return std::nullopt;
      off = off * count_per_axis[a] + static_cast<std::size_t>(j);
    }
    return off;
  }

  /// Same cubes expressed on a grid padded by `lo` cells below each axis.
  CubeTiling rebased(const std::vector<std::size_t>& lo) const {
    CubeTiling t = *this;
    for (std::size_t a = 0; a < dim(); ++a) t.low_cell[a] += static_cast<std::int64_t>(lo[a]);
    return t;
  }

  /// Tiling from physical data: cube side and low corner must sit on the cell lattice.
  static CubeTiling from_physical(const Grid& g, double side, const std::vector<double>& low_corner,
                                  std::vector<std::size_t> counts) {
    if (low_corner.size() != g.dim() || counts.size() != g.dim())
      throw Error(ErrorCode::dimension_error, "tiling dimension does not match grid");
    const double h = g.spacing();
    const double sc = side / h;
    const double sr = std::round(sc);
    if (!(sr >= 1.0) || std::abs(sc - sr) > 1e-9 * std::max(1.0, sc))
      throw Error(ErrorCode::tiling_misaligned, "cube side is not an integer multiple of the spacing");
    CubeTiling t;
    t.side_cells = static_cast<std::size_t>(sr);
    t.low_cell.resize(g.dim());
    for (std::size_t a = 0; a < g.dim(); ++a) {
      const double c = (low_corner[a] - g.origin()[a]) / h;
      const double cr = std::round(c);
      if (std::abs(c - cr) > 1e-9 * std::max(1.0, std::abs(c)))
        throw Error(ErrorCode::tiling_misaligned, "cube corner is not on the cell lattice");
      t.low_cell[a] = static_cast<std::int64_t>(cr);
    }
    t.count_per_axis = std::move(counts);
    return t;
  }
};

/// Largest s >= 1 with s*h*sqrt(n) < rho, or nullopt when rho <= h*sqrt(n).
inline std::optional<std::size_t> cube_side_for(const Grid& g, double rho) {
  const double unit = g.spacing() * std::sqrt(static_cast<double>(g.dim()));
  auto s = static_cast<std::int64_t>(std::ceil(rho / unit)) - 1;
  while (s >= 1 && !(static_cast<double>(s) * unit < rho)) --s;
  while (static_cast<double>(s + 1) * unit < rho) ++s;
  if (s < 1) return std::nullopt;
  return static_cast<std::size_t>(s);
}

/// Smallest cube array anchored at the grid origin whose closure contains the
/// radius-R ball, restricted to cubes meeting the box (elsewhere f = 0).
inline CubeTiling make_tiling(const Grid& g, double R, double rho) {
  auto s = cube_side_for(g, rho);
  if (!s)
    throw Error(ErrorCode::not_certifiable,
                "translation modulus: rho = " + std::to_string(rho) + " does not exceed h*sqrt(n) = " +
                    std::to_string(g.spacing() * std::sqrt(static_cast<double>(g.dim()))) +
                    "; no cube of whole cells fits");
  CubeTiling t;
  t.side_cells = *s;
  t.low_cell.resize(g.dim());
  t.count_per_axis.resize(g.dim());
  const double side = static_cast<double>(*s) * g.spacing();
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const double o = g.origin()[a];
    auto j_lo = static_cast<std::int64_t>(std::floor((-R - o) / side));
    auto j_hi = static_cast<std::int64_t>(std::ceil((R - o) / side)) - 1;
    const auto box_hi = static_cast<std::int64_t>((g.shape()[a] + *s - 1) / *s) - 1;
    j_lo = std::max<std::int64_t>(j_lo, 0);
    j_hi = std::min(j_hi, box_hi);
    t.low_cell[a] = j_lo * static_cast<std::int64_t>(*s);
    t.count_per_axis[a] = j_hi >= j_lo ? static_cast<std::size_t>(j_hi - j_lo + 1) : 0;
  }
  return t;
}

namespace detail {

inline void check_tiling(const Grid& g, const CubeTiling& t) {
  if (t.dim() != g.dim() || t.count_per_axis.size() != g.dim())
    throw Error(ErrorCode::dimension_error, "tiling dimension does not match grid");
  if (t.side_cells == 0) throw Error(ErrorCode::tiling_misaligned, "cube side must be at least one cell");
}

/// Cells to add below/above each axis so every cube fits on the grid.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> tiling_padding(const Grid& g,
                                                                                     const CubeTiling& t) {
  std::vector<std::size_t> lo(g.dim(), 0), hi(g.dim(), 0);
  if (t.cube_count() == 0) return {lo, hi};
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const std::int64_t first = t.low_cell[a];
    const std::int64_t last = first + static_cast<std::int64_t>(t.count_per_axis[a] * t.side_cells);
    lo[a] = static_cast<std::size_t>(std::max<std::int64_t>(0, -first));
    hi[a] = static_cast<std::size_t>(std::max<std::int64_t>(0, last - static_cast<std::int64_t>(g.shape()[a])));
  }
  return {lo, hi};
}

inline std::vector<double> cube_averages(const GridFunction& f, const CubeTiling& t) {
  std::vector<double> sums(t.cube_count(), 0.0);
  for_each_index(f.grid().shape(), [&](const Index& idx, std::size_t off) {
    if (auto c = t.cube_of(idx)) sums[*c] += f[off];
  });
  const double cells = std::pow(static_cast<double>(t.side_cells), static_cast<double>(t.dim()));
  for (auto& s : sums) s /= cells;
  return sums;
}

}  // namespace detail

/// Pf: the cube average on each cube, zero off the tiling. The result lives on
/// f's grid padded just enough to hold every cube.
inline GridFunction projection_P(const GridFunction& f, const CubeTiling& t) {
  detail::check_tiling(f.grid(), t);
  const auto avg = detail::cube_averages(f, t);
  const auto [lo, hi] = detail::tiling_padding(f.grid(), t);
  const Grid big = padded_grid(f.grid(), lo, hi);
  const CubeTiling tb = t.rebased(lo);
  std::vector<double> out(big.size(), 0.0);
  for_each_index(big.shape(), [&](const Index& idx, std::size_t off) {
    if (auto c = tb.cube_of(idx)) out[off] = avg[*c];
  });
  return GridFunction(big, std::move(out));
}

/// ||f - Pf||_p computed exactly on the padded grid.
inline double projection_defect(const GridFunction& f, const CubeTiling& t, double p) {
  detail::check_exponent(p);
  const GridFunction pf = projection_P(f, t);
  const auto [lo, hi] = detail::tiling_padding(f.grid(), t);
  return lp_distance(embed(f, lo, hi), pf, p);
}

/// Coordinates of Pf weighted by |Q|^{1/p}, so the l^p distance between two
/// coefficient vectors equals ||Pf - Pg||_p.
inline std::vector<double> cube_coefficients(const GridFunction& f, const CubeTiling& t, double p) {
  detail::check_exponent(p);
  detail::check_tiling(f.grid(), t);
  auto c = detail::cube_averages(f, t);
  const double vol = std::pow(static_cast<double>(t.side_cells) * f.grid().spacing(), static_cast<double>(t.dim()));
  const double w = std::pow(vol, 1.0 / p);
  for (auto& x : c) x *= w;
  return c;
}

/// (2^n + 1)^{1/p}
inline double projection_defect_factor(std::size_t n, double p) {
  return std::pow(std::pow(2.0, static_cast<double>(n)) + 1.0, 1.0 / p);
}

/// One-centre certificate when every member equals the first one, or nullopt.
inline std::optional<CoverCertificate> degenerate_cover(const FunctionFamily& F, double eps) {
  for (std::size_t i = 1; i < F.size(); ++i)
    if (!std::equal(F[i].values().begin(), F[i].values().end(), F[0].values().begin())) return std::nullopt;
  CoverCertificate cert;
  cert.epsilon = eps;
  cert.radius = 0.0;
  cert.centers = {0};
  cert.assignment.assign(F.size(), 0);
  cert.verified_max_distance = 0.0;
  return cert;
}

/// Runs the projection pipeline at the moduli's (R, rho). A family of
/// identical members is certified directly with a single centre.
inline CoverCertificate kr_certify(const FunctionFamily& F, double p, double eps, const ModuliReport& moduli) {
  detail::check_exponent(p);
  detail::check_epsilon(eps);
  if (auto single = degenerate_cover(F, eps)) return *single;
  if (moduli.p != p || moduli.epsilon != eps)
    throw Error(ErrorCode::invalid_argument, "moduli were evaluated at a different (p, eps)");
  if (!moduli.tail_radius)
    throw Error(ErrorCode::prerequisites_unmet, "tail modulus: no tabulated R has sup tail < eps^p");
  if (!moduli.translation_rho)
    throw Error(ErrorCode::prerequisites_unmet, "translation modulus: no tabulated rho has sup defect < eps^p");

  const Grid& g = F.grid();
  const CubeTiling t = make_tiling(g, *moduli.tail_radius, *moduli.translation_rho);
  std::vector<std::vector<double>> coeffs(F.size());
  detail::parallel_for(F.size(), [&](std::size_t i) { coeffs[i] = cube_coefficients(F[i], t, p); });

  const double contract = (projection_defect_factor(g.dim(), p) + 1.0) * eps;
  auto cert = pullback_cover(
      coeffs, [p](const std::vector<double>& a, const std::vector<double>& b) { return lp_vector_distance(a, b, p); },
      eps, contract, [&](std::size_t i, std::size_t j) { return lp_distance(F[i], F[j], p); });
  cert.epsilon = eps;
  cert.pipeline = PipelineInfo{*moduli.tail_radius, *moduli.translation_rho, t.side_cells, t.cube_count()};
  return cert;
}

inline CoverCertificate kr_certify(const FunctionFamily& F, double p, double eps, const std::vector<double>& r_grid,
                                   const std::vector<double>& rho_grid) {
  return kr_certify(F, p, eps, family_moduli(F, p, eps, r_grid, rho_grid));
}

inline CoverCertificate kr_certify(const FunctionFamily& F, double p, double eps) {
  return kr_certify(F, p, eps, family_moduli(F, p, eps));
}

/// Necessity-side quantities read off a verified eps-cover whose centres are
/// members: R is the largest of the centres' tail radii and rho the smallest
/// of their translation radii. Every member then satisfies
///   tail(f, R)^{1/p} < 2 eps   and   defect(f, k)^{1/p} < 3 eps  for |k h| <= rho.
struct ConverseBounds {
  double R = 0.0;
  double rho = 0.0;
  double max_tail_root = 0.0;
  double max_defect_root = 0.0;

  bool tail_within(double eps) const noexcept { return max_tail_root < 2.0 * eps; }
  bool translation_within(double eps) const noexcept { return max_defect_root < 3.0 * eps; }
};

inline ConverseBounds converse_bounds(const FunctionFamily& F, const CoverCertificate& cert, double p, double eps,
                                      const std::vector<double>& r_grid, const std::vector<double>& rho_grid) {
  detail::check_exponent(p);
  detail::check_epsilon(eps);
  detail::check_tabulation(r_grid, "R grid", true);
  detail::check_tabulation(rho_grid, "rho grid", false);
  if (cert.verified_max_distance > eps)
    throw Error(ErrorCode::invalid_argument, "certificate is not an eps-cover");
  const double target = std::pow(eps, p);

  ConverseBounds out;
  std::optional<double> rho;
  for (auto c : cert.centers) {
    std::optional<double> rc;
    for (double r : r_grid)
      if (tail_mass(F[c], r, p) < target) {
        rc = r;
        break;
      }
    if (!rc) throw Error(ErrorCode::prerequisites_unmet, "centre '" + F.label(c) + "' has no tabulated tail radius");
    out.R = std::max(out.R, *rc);

    const auto prof = defect_profile(F[c], p, rho_grid);
    std::optional<double> pc;
    for (std::size_t j = 0; j < rho_grid.size(); ++j)
      if (prof[j] < target) pc = rho_grid[j];
    if (!pc)
      throw Error(ErrorCode::prerequisites_unmet, "centre '" + F.label(c) + "' has no tabulated translation radius");
    rho = rho ? std::min(*rho, *pc) : *pc;
  }
  out.rho = *rho;

  std::vector<double> tails(F.size()), defects(F.size());
  const auto shifts = lattice_shifts(F.grid().dim(), F.grid().spacing(), out.rho);
  detail::parallel_for(F.size(), [&](std::size_t i) {
    tails[i] = detail::root(tail_mass(F[i], out.R, p), p);
    double d = 0.0;
    for (const auto& k : shifts) d = std::max(d, translation_defect(F[i], k, p));
    defects[i] = detail::root(d, p);
  });
  for (std::size_t i = 0; i < F.size(); ++i) {
    out.max_tail_root = std::max(out.max_tail_root, tails[i]);
    out.max_defect_root = std::max(out.max_defect_root, defects[i]);
  }
  return out;
}

}  // namespace compactkit
