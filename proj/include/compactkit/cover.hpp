#pragma once

// Finite covers built by first-fit greedy nets, and the pullback construction:
// a net on the images Phi(x) whose preimages form a cover of the members,
// verified afterwards against the true member distances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "compactkit/detail/parallel.hpp"
#include "compactkit/grid.hpp"

namespace compactkit {

/// Parameters of the cube-average pipeline that produced a certificate.
struct PipelineInfo {
  double R = 0.0;
  double rho = 0.0;
  std::size_t cube_side_cells = 0;
  std::size_t cube_count = 0;
};

struct CoverCertificate {
  double epsilon = 0.0;
  double radius = 0.0;                 ///< claimed covering radius
  std::vector<std::size_t> centers;    ///< member indices acting as centres
  std::vector<std::size_t> assignment; ///< member -> position in `centers`
  double verified_max_distance = 0.0;  ///< max member-to-centre distance, measured
  std::optional<PipelineInfo> pipeline;

  std::size_t center_count() const noexcept { return centers.size(); }
  std::size_t center_of(std::size_t member) const { return centers.at(assignment.at(member)); }
};

enum class NetRule {
  strict,    ///< join a centre iff distance < threshold
  inclusive, ///< join a centre iff distance <= threshold
};

struct GreedyNet {
  std::vector<std::size_t> centers;
  std::vector<std::size_t> assignment;
};

/// First-fit net in input order: a point becomes a centre iff no existing
/// centre is within `threshold`; otherwise it joins the first such centre.
template <class Dist>
GreedyNet greedy_net(std::size_t n, Dist&& dist, double threshold, NetRule rule) {
  GreedyNet net;
  net.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::size_t> hit;
    for (std::size_t c = 0; c < net.centers.size() && !hit; ++c) {
      const double d = dist(i, net.centers[c]);
      if (rule == NetRule::strict ? d < threshold : d <= threshold) hit = c;
    }
    if (hit) {
      net.assignment[i] = *hit;
    } else {
      net.assignment[i] = net.centers.size();
      net.centers.push_back(i);
    }
  }
  return net;
}

inline double lp_vector_distance(std::span<const double> a, std::span<const double> b, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += detail::abs_pow(a[i] - b[i], p);
  return detail::root(s, p);
}

inline double sup_vector_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Measures max member-to-centre distance and checks it against the radius.
/// Throws contract_violation when the claimed radius does not hold.
template <class MemberDist>
void verify_certificate(CoverCertificate& cert, std::size_t members, MemberDist&& member_dist) {
  if (cert.assignment.size() != members)
    throw Error(ErrorCode::invalid_argument, "certificate does not assign every member");
  std::vector<double> d(members, 0.0);
  detail::parallel_for(members, [&](std::size_t i) {
    const std::size_t c = cert.center_of(i);
    d[i] = c == i ? 0.0 : member_dist(i, c);
  });
  cert.verified_max_distance = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
  if (cert.verified_max_distance > cert.radius)
    throw Error(ErrorCode::contract_violation,
                "verified distance " + std::to_string(cert.verified_max_distance) + " exceeds claimed radius " +
                    std::to_string(cert.radius));
}

/// Pullback of a delta-net on the images to a member cover of radius
/// `contract_radius`. The caller's contract (image distance < delta implies
/// member distance < contract_radius) is checked on the data, never assumed.
template <class ImageDist, class MemberDist>
CoverCertificate pullback_cover(const std::vector<std::vector<double>>& images, ImageDist&& image_dist, double delta,
                                double contract_radius, MemberDist&& member_dist) {
  if (!(delta > 0.0)) throw Error(ErrorCode::invalid_argument, "delta must be positive");
  auto net = greedy_net(
      images.size(), [&](std::size_t i, std::size_t j) { return image_dist(images[i], images[j]); }, delta,
      NetRule::strict);
  CoverCertificate cert;
  cert.epsilon = delta;
  cert.radius = contract_radius;
  cert.centers = std::move(net.centers);
  cert.assignment = std::move(net.assignment);
  verify_certificate(cert, images.size(), member_dist);
  return cert;
}

/// Greedy eps-cover directly in L^p distance, no projection. Radius eps.
inline CoverCertificate greedy_cover(const FunctionFamily& F, double p, double eps) {
  detail::check_exponent(p);
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
  auto dist = [&](std::size_t i, std::size_t j) { return lp_distance(F[i], F[j], p); };
  auto net = greedy_net(F.size(), dist, eps, NetRule::inclusive);
  CoverCertificate cert;
  cert.epsilon = eps;
  cert.radius = eps;
  cert.centers = std::move(net.centers);
  cert.assignment = std::move(net.assignment);
  verify_certificate(cert, F.size(), dist);
  return cert;
}

/// Greedy upper bound on the minimal number of eps-balls (centred at members)
/// covering F in L^p.
inline std::size_t covering_number(const FunctionFamily& F, double p, double eps) {
  return greedy_cover(F, p, eps).center_count();
}

}  // namespace compactkit
