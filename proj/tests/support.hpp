#pragma once

// Shared generators and brute-force oracles for the test programs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "compactkit/compactkit.hpp"

namespace cktest {

using namespace compactkit;

inline Grid line_grid(std::size_t cells, double h, double origin) { return Grid({cells}, {origin}, h); }

inline Grid square_grid(std::size_t cells, double h, double origin) {
  return Grid({cells, cells}, {origin, origin}, h);
}

/// Samples `fn` at cell centres.
inline GridFunction sample(const Grid& g, const std::function<double(const std::vector<double>&)>& fn) {
  std::vector<double> v(g.size());
  for_each_index(g.shape(), [&](const Index& idx, std::size_t off) { v[off] = fn(g.cell_center(idx)); });
  return GridFunction(g, std::move(v));
}

inline GridFunction from_values(const Grid& g, std::vector<double> v) { return GridFunction(g, std::move(v)); }

inline GridFunction random_values(const Grid& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(g.size());
  for (auto& x : v) x = U(rng);
  return GridFunction(g, std::move(v));
}

inline double gaussian(const std::vector<double>& x, const std::vector<double>& c, double w) {
  double r2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
  return std::exp(-r2 / (2.0 * w * w));
}

/// Sum of a few Gaussian bumps with centres within `spread` of the origin.
inline GridFunction random_bumps(const Grid& g, std::mt19937_64& rng, int count, double spread, double wmin,
                                 double wmax) {
  std::uniform_real_distribution<double> C(-spread, spread), W(wmin, wmax), A(-1.0, 1.0);
  std::vector<std::vector<double>> centers;
  std::vector<double> widths, amps;
  for (int b = 0; b < count; ++b) {
    std::vector<double> c(g.dim());
    for (auto& x : c) x = C(rng);
    centers.push_back(c);
    widths.push_back(W(rng));
    amps.push_back(A(rng));
  }
  return sample(g, [&](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t b = 0; b < centers.size(); ++b) s += amps[b] * gaussian(x, centers[b], widths[b]);
    return s;
  });
}

/// Smooth bump (1 - r^2)^3 of radius `r0` around `c`, zero outside.
inline double smooth_bump(const std::vector<double>& x, const std::vector<double>& c, double r0) {
  double r2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
  r2 /= r0 * r0;
  return r2 >= 1.0 ? 0.0 : std::pow(1.0 - r2, 3);
}

/// Random trigonometric profile times a cutoff that vanishes well inside the box.
inline GridFunction random_cutoff_smooth(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> F(0.5, 3.0), P(0.0, 2.0 * std::numbers::pi), A(-1.0, 1.0);
  std::vector<double> freq(g.dim()), phase(g.dim());
  for (auto& f : freq) f = F(rng);
  for (auto& p : phase) p = P(rng);
  const double amp = A(rng), bias = A(rng);
  std::vector<double> c(g.dim());
  double r0 = 1e300;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const double L = static_cast<double>(g.shape()[a]) * g.spacing();
    c[a] = g.origin()[a] + 0.5 * L;
    r0 = std::min(r0, 0.4 * L);
  }
  return sample(g, [&](const std::vector<double>& x) {
    double t = bias;
    for (std::size_t a = 0; a < x.size(); ++a) t += amp * std::sin(freq[a] * x[a] + phase[a]);
    return t * smooth_bump(x, c, r0);
  });
}

/// L^p distance by an explicit loop, independent of the library's reductions.
inline double direct_lp_distance(const GridFunction& f, const GridFunction& g, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i] - g[i]), p);
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

/// Smallest number of closed balls of `radius`, centred at points, covering all n points.
inline std::size_t optimal_cover_size(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist,
                                      double radius) {
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k >= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      bool hit = false;
      for (std::size_t c = 0; c < n && !hit; ++c)
        if ((mask >> c) & 1u) hit = dist(i, c) <= radius;
      ok = hit;
    }
    if (ok) best = k;
  }
  return best;
}

/// Re-measures a certificate with `dist`; true iff every member is within the radius.
inline bool recheck_certificate(const CoverCertificate& cert, std::size_t members,
                                const std::function<double(std::size_t, std::size_t)>& dist) {
  if (cert.assignment.size() != members) return false;
  double worst = 0.0;
  for (std::size_t i = 0; i < members; ++i) {
    const auto c = cert.center_of(i);
    if (c >= members) return false;
    worst = std::max(worst, dist(i, c));
  }
  return worst <= cert.radius;
}

inline bool recheck_certificate(const CoverCertificate& cert, const FunctionFamily& F, double p) {
  return recheck_certificate(cert, F.size(),
                             [&](std::size_t i, std::size_t j) { return direct_lp_distance(F[i], F[j], p); });
}

}  // namespace cktest
