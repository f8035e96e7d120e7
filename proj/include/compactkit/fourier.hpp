#pragma once

// Unitary discrete Fourier transform on the box treated as a torus, spectral
// tails, and the Fourier-tail route to a uniform translation modulus in L^2.
//
// Coefficient c_m = N^{-1/2} sum_x f_x exp(-2 pi i m.x / N) per axis, so that
// h^n sum |c_m|^2 = ||f||_2^2 exactly. Index j along an axis of length N maps
// to the centred integer frequency m (j if j <= N/2, else j - N) and to the
// physical frequency xi = 2 pi m / (N h).

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "compactkit/detail/parallel.hpp"
#include "compactkit/grid.hpp"
#include "compactkit/moduli.hpp"

namespace compactkit {

using Complex = std::complex<double>;

struct SpectralFunction {
  Grid grid;
  std::vector<Complex> coefficients;

  /// h^n, the factor turning sum |c|^2 into an L^2 mass
  double normalization() const { return grid.cell_volume(); }
};

inline std::int64_t centered_frequency(std::size_t j, std::size_t n) {
  return 2 * j <= n ? static_cast<std::int64_t>(j) : static_cast<std::int64_t>(j) - static_cast<std::int64_t>(n);
}

/// Physical frequency vector of the coefficient at multi-index `idx`.
inline std::vector<double> physical_frequency(const Grid& g, const Index& idx) {
  std::vector<double> xi(g.dim());
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const double L = static_cast<double>(g.shape()[a]) * g.spacing();
    xi[a] = 2.0 * std::numbers::pi * static_cast<double>(centered_frequency(static_cast<std::size_t>(idx[a]), g.shape()[a])) / L;
  }
  return xi;
}

namespace detail {

// In-place unitary DFT along one axis; sign = -1 forward, +1 inverse.
inline void transform_axis(std::vector<Complex>& data, const std::vector<std::size_t>& shape, std::size_t axis,
                           int sign) {
  const std::size_t n = shape[axis];
  if (n == 1) return;
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < shape.size(); ++a) stride *= shape[a];
  std::size_t outer = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];

  std::vector<Complex> twiddle(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double ang = static_cast<double>(sign) * 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    twiddle[t] = {std::cos(ang), std::sin(ang)};
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Complex> line(n), out(n);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * n * stride + s;
      for (std::size_t j = 0; j < n; ++j) line[j] = data[base + j * stride];
      for (std::size_t m = 0; m < n; ++m) {
        Complex acc{0.0, 0.0};
        std::size_t t = 0;
        for (std::size_t j = 0; j < n; ++j) {
          acc += line[j] * twiddle[t];
          t += m;
          if (t >= n) t -= n;
        }
        out[m] = acc * scale;
      }
      for (std::size_t m = 0; m < n; ++m) data[base + m * stride] = out[m];
    }
}

}  // namespace detail

/// Unitary DFT of complex samples laid out row-major on `grid`.
inline SpectralFunction dft(const Grid& grid, std::span<const Complex> samples) {
  if (samples.size() != grid.size()) throw Error(ErrorCode::size_mismatch, "sample count does not match grid");
  std::vector<Complex> data(samples.begin(), samples.end());
  for (std::size_t a = 0; a < grid.dim(); ++a) detail::transform_axis(data, grid.shape(), a, -1);
  return {grid, std::move(data)};
}

inline SpectralFunction dft(const GridFunction& f) {
  std::vector<Complex> c(f.values().begin(), f.values().end());
  return dft(f.grid(), c);
}

inline std::vector<Complex> inverse_dft(const SpectralFunction& s) {
  std::vector<Complex> data(s.coefficients);
  for (std::size_t a = 0; a < s.grid.dim(); ++a) detail::transform_axis(data, s.grid.shape(), a, +1);
  return data;
}

/// h^n * sum of |c|^2 over coefficients with |xi| >= rho.
inline double spectral_tail(const SpectralFunction& s, double rho) {
  if (!(rho >= 0.0)) throw Error(ErrorCode::invalid_argument, "rho must be >= 0");
  double acc = 0.0;
  for_each_index(s.grid.shape(), [&](const Index& idx, std::size_t off) {
    const auto xi = physical_frequency(s.grid, idx);
    double n2 = 0.0;
    for (double x : xi) n2 += x * x;
    if (std::sqrt(n2) >= rho) acc += std::norm(s.coefficients[off]);
  });
  return s.normalization() * acc;
}

/// h^n * sum |c|^2, equal to ||f||_2^2 by Plancherel.
inline double spectral_mass(const SpectralFunction& s) { return spectral_tail(s, 0.0); }

/// Circular lattice translation on the torus: result_x = f_{(x + k) mod N}.
inline GridFunction circular_shift(const GridFunction& f, const Index& k) {
  const Grid& g = f.grid();
  if (k.size() != g.dim()) throw Error(ErrorCode::dimension_error, "shift vector has wrong dimension");
  std::vector<double> out(g.size());
  Index src(g.dim());
  for_each_index(g.shape(), [&](const Index& idx, std::size_t off) {
    for (std::size_t a = 0; a < g.dim(); ++a) {
      const auto n = static_cast<std::int64_t>(g.shape()[a]);
      src[a] = ((idx[a] + k[a]) % n + n) % n;
    }
    out[off] = f[g.flat(src)];
  });
  return GridFunction(g, std::move(out));
}

/// Direct torus defect: integral of |f(x + k h) - f(x)|^2 with periodic wrap.
inline double circular_shift_defect(const GridFunction& f, const Index& k) {
  const double d = lp_distance(circular_shift(f, k), f, 2.0);
  return d * d;
}

/// Torus defect computed on the spectral side: h^n sum |e^{i xi.y} - 1|^2 |c|^2.
inline double plancherel_defect(const SpectralFunction& s, const Index& k) {
  const Grid& g = s.grid;
  if (k.size() != g.dim()) throw Error(ErrorCode::dimension_error, "shift vector has wrong dimension");
  double acc = 0.0;
  for_each_index(g.shape(), [&](const Index& idx, std::size_t off) {
    double phase = 0.0;
    for (std::size_t a = 0; a < g.dim(); ++a)
      phase += 2.0 * std::numbers::pi * static_cast<double>(idx[a]) * static_cast<double>(k[a]) /
               static_cast<double>(g.shape()[a]);
    const double half = std::sin(0.5 * phase);
    acc += 4.0 * half * half * std::norm(s.coefficients[off]);
  });
  return s.normalization() * acc;
}

inline double plancherel_defect(const GridFunction& f, const Index& k) { return plancherel_defect(dft(f), k); }

/// 16 log-spaced frequencies from the lowest nonzero |xi| to just past the
/// largest representable |xi|, so the last entry always has an empty tail.
inline std::vector<double> default_frequency_grid(const Grid& g) {
  double lmax = 0.0, top2 = 0.0;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const double L = static_cast<double>(g.shape()[a]) * g.spacing();
    lmax = std::max(lmax, L);
    const double m = static_cast<double>(g.shape()[a] / 2);
    const double xi = 2.0 * std::numbers::pi * m / L;
    top2 += xi * xi;
  }
  const double lo = 2.0 * std::numbers::pi / lmax;
  const double hi = std::max(lo, std::sqrt(top2)) * 1.01;
  std::vector<double> r(16);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = lo * std::pow(hi / lo, static_cast<double>(i) / 15.0);
  return r;
}

struct SpectralReport {
  bool trivial = false;    ///< M = 0: family is {0}
  double M = 0.0;          ///< sup ||f||_2
  double rho = 0.0;        ///< frequency cut with sup tail <= eps/4
  double y_bound = 0.0;    ///< sqrt(eps) / (rho M); +inf when trivial
  std::vector<double> per_member_tails;
  std::size_t shifts_checked = 0;
  double max_checked_defect = 0.0;  ///< largest torus defect^2 seen, must be < 2 eps
  double torus_discrepancy = 0.0;   ///< max |torus defect - zero-fill defect| on checked shifts
};

/// Uniform L^2 translation modulus from spectral tails: picks the smallest
/// tabulated rho whose sup tail is <= eps/4, then every lattice shift with
/// |k h| < sqrt(eps)/(rho M) has torus defect^2 < M^2 rho^2 |y|^2 + eps < 2 eps.
/// The bound is checked exhaustively on the lattice before returning.
inline SpectralReport pego_certify(const FunctionFamily& F, double eps, const std::vector<double>& rho_grid) {
  detail::check_epsilon(eps);
  detail::check_tabulation(rho_grid, "frequency grid", false);
  const Grid& g = F.grid();
  std::vector<SpectralFunction> spectra(F.size());
  detail::parallel_for(F.size(), [&](std::size_t i) { spectra[i] = dft(F[i]); });

  SpectralReport rep;
  for (std::size_t i = 0; i < F.size(); ++i) rep.M = std::max(rep.M, lp_norm(F[i], 2.0));
  if (rep.M == 0.0) {
    rep.trivial = true;
    rep.y_bound = std::numeric_limits<double>::infinity();
    rep.per_member_tails.assign(F.size(), 0.0);
    return rep;
  }

  std::optional<std::size_t> chosen;
  std::vector<double> tails(F.size());
  for (std::size_t j = 0; j < rho_grid.size() && !chosen; ++j) {
    detail::parallel_for(F.size(), [&](std::size_t i) { tails[i] = spectral_tail(spectra[i], rho_grid[j]); });
    double sup = 0.0;
    for (double t : tails) sup = std::max(sup, t);
    if (sup <= eps / 4.0) chosen = j;
  }
  if (!chosen) throw Error(ErrorCode::not_certifiable, "spectral tail: no tabulated rho has sup tail <= eps/4");
  rep.rho = rho_grid[*chosen];
  rep.per_member_tails = tails;
  rep.y_bound = std::sqrt(eps) / (rep.rho * rep.M);

  // Centred representatives suffice: any k is congruent mod N to one with
  // |k_a| <= N_a/2 and no larger Euclidean length.
  std::vector<Index> shifts;
  std::vector<std::size_t> box(g.dim());
  for (std::size_t a = 0; a < g.dim(); ++a) box[a] = g.shape()[a];
  for_each_index(box, [&](const Index& e, std::size_t) {
    Index k(g.dim());
    bool nonzero = false;
    for (std::size_t a = 0; a < g.dim(); ++a) {
      k[a] = centered_frequency(static_cast<std::size_t>(e[a]), g.shape()[a]);
      nonzero = nonzero || k[a] != 0;
    }
    if (nonzero && euclidean_length(k, g.spacing()) < rep.y_bound) shifts.push_back(std::move(k));
  });
  rep.shifts_checked = shifts.size();

  std::vector<double> worst(F.size(), 0.0), gap(F.size(), 0.0);
  detail::parallel_for(F.size(), [&](std::size_t i) {
    for (const auto& k : shifts) {
      const double torus = circular_shift_defect(F[i], k);
      worst[i] = std::max(worst[i], torus);
      gap[i] = std::max(gap[i], std::abs(torus - translation_defect(F[i], k, 2.0)));
    }
  });
  for (std::size_t i = 0; i < F.size(); ++i) {
    rep.max_checked_defect = std::max(rep.max_checked_defect, worst[i]);
    rep.torus_discrepancy = std::max(rep.torus_discrepancy, gap[i]);
  }
  if (!(rep.max_checked_defect < 2.0 * eps))
    throw Error(ErrorCode::contract_violation, "torus defect reached 2 eps inside the certified shift radius");
  return rep;
}

inline SpectralReport pego_certify(const FunctionFamily& F, double eps) {
  return pego_certify(F, eps, default_frequency_grid(F.grid()));
}

}  // namespace compactkit
