#pragma once

// Total boundedness in l^p via finite truncation, and in C(Omega) with the sup
// norm for a finite metric space Omega. Both run through pullback_cover with
// the 3*eps contract.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "compactkit/cover.hpp"
#include "compactkit/error.hpp"

namespace compactkit {

/// Sequences in l^p stored as finite prefixes; entries past a prefix are exactly zero.
struct SequenceFamily {
  std::vector<std::vector<double>> members;
  double p = 2.0;

  void validate() const {
    detail::check_exponent(p);
    if (members.empty()) throw Error(ErrorCode::empty_family, "sequence family has no members");
    for (std::size_t i = 0; i < members.size(); ++i)
      for (double v : members[i])
        if (!std::isfinite(v)) throw Error(ErrorCode::non_finite_value, "sequence " + std::to_string(i));
  }

  std::size_t prefix_length() const {
    std::size_t n = 0;
    for (const auto& m : members) n = std::max(n, m.size());
    return n;
  }

  std::vector<double> padded(std::size_t i, std::size_t n) const {
    std::vector<double> v(members[i]);
    v.resize(n, 0.0);
    return v;
  }
};

/// Truncation at the longest stored prefix leaves every tail exactly zero, so
/// image distance < eps gives member distance < eps + 2 eps.
inline CoverCertificate lp_truncation_certify(const SequenceFamily& S, double eps) {
  S.validate();
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  const std::size_t n = S.prefix_length();
  std::vector<std::vector<double>> images(S.members.size());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = S.padded(i, n);
  const double p = S.p;
  auto dist = [p](const std::vector<double>& a, const std::vector<double>& b) { return lp_vector_distance(a, b, p); };
  auto cert = pullback_cover(images, dist, eps, 3.0 * eps,
                             [&](std::size_t i, std::size_t j) { return dist(images[i], images[j]); });
  cert.epsilon = eps;
  return cert;
}

/// Functions on a finite metric space, one value per point.
struct DiscreteMetricFamily {
  std::vector<std::vector<double>> distance;  ///< dense symmetric table
  std::vector<std::vector<double>> members;

  std::size_t points() const noexcept { return distance.size(); }

  void validate(double tol = 1e-12) const {
    const std::size_t n = points();
    if (n == 0) throw Error(ErrorCode::invalid_argument, "metric space has no points");
    for (std::size_t i = 0; i < n; ++i) {
      if (distance[i].size() != n) throw Error(ErrorCode::shape_error, "distance table is not square");
      if (distance[i][i] != 0.0) throw Error(ErrorCode::invalid_argument, "distance table diagonal must be zero");
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double d = distance[i][j];
        if (!std::isfinite(d) || d < 0.0)
          throw Error(ErrorCode::invalid_argument, "distances must be finite and nonnegative");
        if (d != distance[j][i]) throw Error(ErrorCode::invalid_argument, "distance table is not symmetric");
        for (std::size_t k = 0; k < n; ++k)
          if (d > distance[i][k] + distance[k][j] + tol)
            throw Error(ErrorCode::invalid_argument, "distance table violates the triangle inequality at (" +
                                                         std::to_string(i) + "," + std::to_string(j) + ")");
      }
    if (members.empty()) throw Error(ErrorCode::empty_family, "no member functions");
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (members[m].size() != n)
        throw Error(ErrorCode::size_mismatch, "member " + std::to_string(m) + " does not have one value per point");
      for (double v : members[m])
        if (!std::isfinite(v)) throw Error(ErrorCode::non_finite_value, "member " + std::to_string(m));
    }
  }

  double sup_distance(std::size_t a, std::size_t b) const {
    return sup_vector_distance(members[a], members[b]);
  }
};

/// max |f(x) - f(y)| over members f and point pairs with dist(x, y) < delta.
inline double equicontinuity_modulus(const DiscreteMetricFamily& D, double delta) {
  D.validate();
  if (!(delta > 0.0)) throw Error(ErrorCode::invalid_argument, "delta must be positive");
  double m = 0.0;
  for (std::size_t x = 0; x < D.points(); ++x)
    for (std::size_t y = x + 1; y < D.points(); ++y)
      if (D.distance[x][y] < delta)
        for (const auto& f : D.members) m = std::max(m, std::abs(f[x] - f[y]));
  return m;
}

/// Cover from point evaluations at the landmarks. Requires every point to lie
/// within eps (uniformly over the family) of some landmark; then image sup
/// distance < eps gives member sup distance < 3 eps.
inline CoverCertificate aa_certify(const DiscreteMetricFamily& D, double eps, const std::vector<std::size_t>& landmarks) {
  D.validate();
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  if (landmarks.empty()) throw Error(ErrorCode::landmarks_insufficient, "no landmarks given");
  for (auto l : landmarks)
    if (l >= D.points()) throw Error(ErrorCode::invalid_argument, "landmark index out of range");

  // worst point: the one whose best landmark deviates most
  double worst = 0.0;
  std::size_t worst_point = 0;
  for (std::size_t x = 0; x < D.points(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (auto l : landmarks) {
      double dev = 0.0;
      for (const auto& f : D.members) dev = std::max(dev, std::abs(f[x] - f[l]));
      best = std::min(best, dev);
    }
    if (best > worst || x == 0) {
      worst = best;
      worst_point = x;
    }
  }
  if (!(worst < eps))
    throw Error(ErrorCode::landmarks_insufficient, "point " + std::to_string(worst_point) +
                                                       " deviates by " + std::to_string(worst) +
                                                       " from every landmark");

  std::vector<std::vector<double>> images(D.members.size());
  for (std::size_t m = 0; m < images.size(); ++m)
    for (auto l : landmarks) images[m].push_back(D.members[m][l]);
  auto cert = pullback_cover(
      images, [](const std::vector<double>& a, const std::vector<double>& b) { return sup_vector_distance(a, b); },
      eps, 3.0 * eps, [&](std::size_t a, std::size_t b) { return D.sup_distance(a, b); });
  cert.epsilon = eps;
  return cert;
}

}  // namespace compactkit
