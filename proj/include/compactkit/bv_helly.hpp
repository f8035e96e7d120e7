#pragma once

// One-dimensional bounded variation: total variation of the zero extension,
// Jordan decomposition, the L^1 translation bound, and a finite-resolution
// Helly selection by pigeonhole binning of the monotone parts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "compactkit/grid.hpp"
#include "compactkit/moduli.hpp"

namespace compactkit {

/// Sum of |u_{j+1} - u_j| over consecutive samples, i.e. the variation on [a, b].
inline double interior_variation(std::span<const double> u) {
  double s = 0.0;
  for (std::size_t j = 1; j < u.size(); ++j) s += std::abs(u[j] - u[j - 1]);
  return s;
}

/// A one-dimensional grid function viewed as a BV function on R (zero outside [a, b]).
class BVFunction {
 public:
  explicit BVFunction(GridFunction base) : base_(std::move(base)) {
    if (base_.grid().dim() != 1)
      throw Error(ErrorCode::dimension_error, "BV functions are one-dimensional, got dim " +
                                                  std::to_string(base_.grid().dim()));
    const auto v = base_.values();
    tv_ = interior_variation(v) + std::abs(v.front()) + std::abs(v.back());
  }

  const GridFunction& base() const noexcept { return base_; }
  std::span<const double> values() const noexcept { return base_.values(); }
  std::size_t size() const noexcept { return base_.size(); }

  /// Total variation on R including the jumps to zero at both ends.
  double tv() const noexcept { return tv_; }
  double interior_tv() const { return interior_variation(values()); }

  double sup_norm() const {
    double m = 0.0;
    for (double x : values()) m = std::max(m, std::abs(x));
    return m;
  }

  double support_begin() const { return base_.grid().origin()[0]; }
  double support_end() const {
    return support_begin() + static_cast<double>(base_.grid().shape()[0]) * base_.grid().spacing();
  }

 private:
  GridFunction base_;
  double tv_ = 0.0;
};

inline BVFunction make_bv(double origin, double spacing, std::vector<double> values) {
  const std::size_t n = values.size();
  return BVFunction(GridFunction(Grid({n}, {origin}, spacing), std::move(values)));
}

inline double total_variation(const BVFunction& u) { return u.tv(); }

inline double total_variation(const GridFunction& f) { return BVFunction(f).tv(); }

struct JordanParts {
  BVFunction v;  ///< u(a) + positive variation on [a, x]
  BVFunction w;  ///< negative variation on [a, x]
};

/// u = v - w with v, w nondecreasing. The rises of v and w add up to the
/// variation of u on [a, b].
inline JordanParts jordan_decomposition(const BVFunction& u) {
  const auto x = u.values();
  std::vector<double> v(x.size()), w(x.size());
  v[0] = x[0];
  w[0] = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) {
    const double d = x[j] - x[j - 1];
    v[j] = v[j - 1] + std::max(d, 0.0);
    w[j] = w[j - 1] + std::max(-d, 0.0);
  }
  const Grid& g = u.base().grid();
  return {BVFunction(GridFunction(g, std::move(v))), BVFunction(GridFunction(g, std::move(w)))};
}

struct TranslationCheck {
  double defect = 0.0;  ///< integral |u(x+y) - u(x)| dx over R
  double bound = 0.0;   ///< |y| TV(u)
};

inline TranslationCheck tv_translation_check(const BVFunction& u, std::int64_t k) {
  const double h = u.base().grid().spacing();
  return {translation_defect(u.base(), Index{k}, 1.0), std::abs(static_cast<double>(k)) * h * u.tv()};
}

struct SelectionResult {
  std::vector<std::size_t> indices;
  double tau = 0.0;
  double l1_bound = 0.0;
  std::size_t bins_per_point = 0;
  std::vector<std::size_t> v_bins;  ///< common bin of the selected v-parts at each grid point
  std::vector<std::size_t> w_bins;
};

/// Finite-resolution Helly selection. Every member must have TV <= M and
/// sup norm <= M, so both Jordan parts take values in [-M, M]. Scanning grid
/// points left to right, the survivors are split into bins of width tau/2 and
/// the most populated bin is kept (ties go to the lowest bin); first on the
/// v-parts, then on the w-parts. Selected members differ pointwise by at most
/// tau and in L^1 by at most tau (b - a).
inline SelectionResult helly_select(const std::vector<BVFunction>& seq, double tau, double M_check) {
  if (seq.empty()) throw Error(ErrorCode::empty_family, "selection needs at least one member");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::invalid_argument, "tau must be positive");
  if (!(M_check >= 0.0) || !std::isfinite(M_check)) throw Error(ErrorCode::invalid_argument, "M must be >= 0");
  const Grid& g = seq.front().base().grid();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!(seq[i].base().grid() == g))
      throw Error(ErrorCode::grid_mismatch, "member " + std::to_string(i) + " is not on the common grid");
    if (seq[i].tv() > M_check || seq[i].sup_norm() > M_check)
      throw Error(ErrorCode::bounds_violated, "member " + std::to_string(i) + " has TV " +
                                                  std::to_string(seq[i].tv()) + " and sup " +
                                                  std::to_string(seq[i].sup_norm()) + " against M " +
                                                  std::to_string(M_check));
  }

  // shrink slightly so rounding at bin edges cannot push a same-bin gap past tau/2
  const double width = 0.5 * tau * (1.0 - 1e-9);
  const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 * M_check / width)));
  auto bin_of = [&](double val) {
    const double b = std::floor((val + M_check) / width);
    return static_cast<std::size_t>(std::clamp(b, 0.0, static_cast<double>(bins - 1)));
  };

  std::vector<JordanParts> parts;
  parts.reserve(seq.size());
  for (const auto& u : seq) parts.push_back(jordan_decomposition(u));

  SelectionResult res;
  res.tau = tau;
  res.bins_per_point = bins;
  res.l1_bound = tau * (seq.front().support_end() - seq.front().support_begin());
  std::vector<std::size_t> survivors(seq.size());
  for (std::size_t i = 0; i < survivors.size(); ++i) survivors[i] = i;

  auto pass = [&](bool use_v, std::vector<std::size_t>& profile) {
    profile.resize(g.size());
    std::vector<std::size_t> count(bins);
    for (std::size_t x = 0; x < g.size(); ++x) {
      std::fill(count.begin(), count.end(), 0);
      auto value = [&](std::size_t i) { return use_v ? parts[i].v.values()[x] : parts[i].w.values()[x]; };
      for (auto i : survivors) ++count[bin_of(value(i))];
      const auto best = static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());
      std::erase_if(survivors, [&](std::size_t i) { return bin_of(value(i)) != best; });
      profile[x] = best;
    }
  };
  pass(true, res.v_bins);
  pass(false, res.w_bins);
  res.indices = std::move(survivors);
  return res;
}

}  // namespace compactkit
