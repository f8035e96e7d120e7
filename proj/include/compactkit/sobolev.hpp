#pragma once

// Discrete W^{k,p}: forward-difference derivatives, reduction of a family to
// its derivative families, the gradient bound on translation defects, and
// certification in L^q for W^{1,p}-bounded families with uniform decay.
//
// Certificates rest on moduli computed directly in L^q. The Sobolev constant C
// enters only the embedding diagnostic; it never affects soundness.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compactkit/cover.hpp"
#include "compactkit/grid.hpp"
#include "compactkit/kolmogorov.hpp"
#include "compactkit/moduli.hpp"

namespace compactkit {

using MultiIndex = std::vector<std::size_t>;

/// (f(x + stride*h*e_axis) - f(x)) / (stride*h); the axis shrinks by `stride` cells.
inline GridFunction forward_difference(const GridFunction& f, std::size_t axis, std::size_t stride = 1) {
  const Grid& g = f.grid();
  if (axis >= g.dim()) throw Error(ErrorCode::dimension_error, "axis out of range");
  if (stride == 0) throw Error(ErrorCode::invalid_argument, "stride must be >= 1");
  if (g.shape()[axis] <= stride)
    throw Error(ErrorCode::shape_error, "axis " + std::to_string(axis) + " has " + std::to_string(g.shape()[axis]) +
                                            " cells, too short to difference");
  std::vector<std::size_t> shape(g.shape());
  shape[axis] -= stride;
  Grid out_grid(shape, g.origin(), g.spacing());
  std::vector<double> out(out_grid.size());
  const double step = static_cast<double>(stride) * g.spacing();
  Index nb;
  for_each_index(shape, [&](const Index& idx, std::size_t off) {
    nb = idx;
    nb[axis] += static_cast<std::int64_t>(stride);
    out[off] = (f[g.flat(nb)] - f[g.flat(idx)]) / step;
  });
  return GridFunction(std::move(out_grid), std::move(out));
}

/// Forward-difference partials, one per axis.
inline std::vector<GridFunction> gradient(const GridFunction& f) {
  std::vector<GridFunction> out;
  out.reserve(f.grid().dim());
  for (std::size_t a = 0; a < f.grid().dim(); ++a) out.push_back(forward_difference(f, a));
  return out;
}

/// Integral of |grad f|_p^p = sum_j |d_j f|^p, so each partial is integrated on its own grid.
inline double gradient_energy(const std::vector<GridFunction>& grad, double p) {
  double s = 0.0;
  for (const auto& d : grad) s += lp_norm_pow(d.values(), d.grid().cell_volume(), p);
  return s;
}

inline double gradient_energy(const GridFunction& f, double p) { return gradient_energy(gradient(f), p); }

inline GridFunction derivative(const GridFunction& f, const MultiIndex& alpha) {
  if (alpha.size() != f.grid().dim()) throw Error(ErrorCode::dimension_error, "multi-index has wrong dimension");
  GridFunction d = f;
  for (std::size_t a = 0; a < alpha.size(); ++a)
    for (std::size_t t = 0; t < alpha[a]; ++t) d = forward_difference(d, a);
  return d;
}

/// Multi-indices with |alpha| <= k, by increasing order; within an order the
/// first component descends: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
inline std::vector<MultiIndex> multi_indices(std::size_t n, std::size_t k) {
  std::vector<MultiIndex> out;
  MultiIndex cur(n, 0);
  auto fill = [&](auto&& self, std::size_t axis, std::size_t left) -> void {
    if (axis + 1 == n) {
      cur[axis] = left;
      out.push_back(cur);
      return;
    }
    for (std::size_t take = left + 1; take-- > 0;) {
      cur[axis] = take;
      self(self, axis + 1, left - take);
    }
  };
  for (std::size_t order = 0; order <= k; ++order) fill(fill, 0, order);
  return out;
}

struct SobolevFamily {
  FunctionFamily base;
  double p = 2.0;
  std::size_t k = 0;
  std::vector<std::pair<MultiIndex, FunctionFamily>> derivative_families;

  /// ||f_i||_{k,p}^p = sum over alpha of ||D^alpha f_i||_p^p
  double sobolev_norm_pow(std::size_t i) const {
    double s = 0.0;
    for (const auto& [alpha, fam] : derivative_families)
      s += lp_norm_pow(fam[i].values(), fam[i].grid().cell_volume(), p);
    return s;
  }
};

inline SobolevFamily wkp_family_reduce(const FunctionFamily& F, std::size_t k, double p) {
  detail::check_exponent(p);
  SobolevFamily S{F, p, k, {}};
  for (auto& alpha : multi_indices(F.grid().dim(), k)) {
    std::vector<GridFunction> members;
    members.reserve(F.size());
    for (const auto& f : F.members()) members.push_back(derivative(f, alpha));
    S.derivative_families.emplace_back(alpha, FunctionFamily(std::move(members), F.labels()));
  }
  return S;
}

struct WkpVerdict {
  bool certified = false;
  double epsilon_per_family = 0.0;
  std::vector<MultiIndex> alphas;
  std::vector<std::optional<CoverCertificate>> certificates;
  std::vector<std::string> failures;  ///< empty string where certified
};

/// Certifies every derivative family at eps / (number of multi-indices)^{1/p},
/// using each family's default R and rho tabulations.
inline WkpVerdict wkp_certify(const SobolevFamily& S, double eps) {
  detail::check_epsilon(eps);
  WkpVerdict v;
  const auto count = static_cast<double>(S.derivative_families.size());
  v.epsilon_per_family = eps / std::pow(count, 1.0 / S.p);
  v.certified = true;
  for (const auto& [alpha, fam] : S.derivative_families) {
    v.alphas.push_back(alpha);
    try {
      v.certificates.emplace_back(kr_certify(fam, S.p, v.epsilon_per_family));
      v.failures.emplace_back();
    } catch (const Error& e) {
      if (!e.is_resolution_verdict()) throw;
      v.certificates.emplace_back(std::nullopt);
      v.failures.emplace_back(e.what());
      v.certified = false;
    }
  }
  return v;
}

struct GradientBoundCheck {
  double defect = 0.0;  ///< integral |f(x+y) - f(x)|^p, y = k h
  double bound = 0.0;   ///< |y|_{p'}^p * integral |grad f|_p^p
  bool holds = false;   ///< defect <= bound * (1 + disc_tol)
};

/// |y|_{p'} with p' = p/(p-1); p = 1 gives the max norm.
inline double conjugate_norm(const std::vector<double>& y, double p) {
  if (p == 1.0) {
    double m = 0.0;
    for (double c : y) m = std::max(m, std::abs(c));
    return m;
  }
  const double q = p / (p - 1.0);
  double s = 0.0;
  for (double c : y) s += std::pow(std::abs(c), q);
  return std::pow(s, 1.0 / q);
}

inline GradientBoundCheck gradient_translation_bound(const GridFunction& f, const Index& k, double p,
                                                     double disc_tol = 0.05) {
  detail::check_exponent(p);
  const auto grad = gradient(f);
  if (k.size() != f.grid().dim()) throw Error(ErrorCode::dimension_error, "shift vector has wrong dimension");
  std::vector<double> y(k.size());
  for (std::size_t a = 0; a < k.size(); ++a) y[a] = static_cast<double>(k[a]) * f.grid().spacing();
  GradientBoundCheck out;
  out.defect = translation_defect(f, k, p);
  out.bound = std::pow(conjugate_norm(y, p), p) * gradient_energy(grad, p);
  out.holds = out.defect <= out.bound * (1.0 + disc_tol);
  return out;
}

/// p* with 1/p* = 1/p - 1/n, defined for 1 <= p < n.
inline double conjugate_sobolev_exponent(double p, std::size_t n) {
  detail::check_exponent(p);
  const auto nd = static_cast<double>(n);
  if (!(p < nd))
    throw Error(ErrorCode::exponent_undefined, "conjugate exponent needs p < n (p = " + std::to_string(p) +
                                                   ", n = " + std::to_string(n) + ")");
  return p * nd / (nd - p);
}

struct MemberEmbedding {
  double lhs = 0.0;  ///< lambda^{n/q} ||f||_q
  double rhs = 0.0;  ///< C (lambda^n int |f|^p + lambda^{n-p} int |grad f|_p^p)^{1/p}
  bool consistent = true;
};

struct EmbeddingDiagnostic {
  double p = 0.0, q = 0.0;
  std::size_t n = 0;
  double p_star = 0.0;
  double C = 0.0;
  double lambda = 1.0;
  bool lambda_capped = false;  ///< doubling scan hit its stopping bound
  std::vector<MemberEmbedding> per_member;
  bool consistent = true;      ///< false signals C too small for this family
};

struct RkResult {
  CoverCertificate certificate;
  EmbeddingDiagnostic diagnostic;
  double joint_tail_radius = 0.0;
};

inline constexpr std::size_t kLambdaDoublings = 128;

/// Certification in L^q of a W^{1,p} family with uniform joint decay of
/// |f|^p + |grad f|_p^p. The cover comes from the L^q pipeline; the diagnostic
/// reports the lambda that a doubling scan finds for
///   C (lambda^{n-p} 2^p sup int |grad f|_p^p)^{1/p} <= eps lambda^{n/q}
/// and both sides of the rescaled embedding inequality for each member.
inline RkResult rk_certify(const SobolevFamily& S, double q, double eps, double C, const std::vector<double>& r_grid,
                           const std::vector<double>& rho_grid) {
  detail::check_epsilon(eps);
  if (S.k != 1) throw Error(ErrorCode::invalid_argument, "L^q certification expects a W^{1,p} family (k = 1)");
  if (!(C > 0.0) || !std::isfinite(C)) throw Error(ErrorCode::invalid_argument, "embedding constant must be positive");
  const FunctionFamily& F = S.base;
  const std::size_t n = F.grid().dim();
  const double p = S.p;
  const auto nd = static_cast<double>(n);
  if (!(p >= 1.0) || !(p < nd))
    throw Error(ErrorCode::exponent_error, "need 1 <= p < n (p = " + std::to_string(p) + ", n = " + std::to_string(n) + ")");
  const double p_star = conjugate_sobolev_exponent(p, n);
  if (!(q >= p) || !(q < p_star))
    throw Error(ErrorCode::exponent_error,
                "need p <= q < p* (q = " + std::to_string(q) + ", p* = " + std::to_string(p_star) + ")");
  detail::check_tabulation(r_grid, "R grid", true);

  std::vector<std::vector<GridFunction>> grads(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) grads[i] = gradient(F[i]);

  const double target = std::pow(eps, p);
  std::optional<double> joint_R;
  for (double R : r_grid) {
    double sup = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      double t = tail_mass(F[i], R, p);
      for (const auto& d : grads[i]) t += tail_mass(d, R, p);
      sup = std::max(sup, t);
    }
    if (sup < target) {
      joint_R = R;
      break;
    }
  }
  if (!joint_R)
    throw Error(ErrorCode::prerequisites_unmet, "joint tail: no tabulated R has sup int_{|x|>R} |f|^p + |grad f|^p < eps^p");

  RkResult res;
  res.joint_tail_radius = *joint_R;
  res.certificate = kr_certify(F, q, eps, family_moduli(F, q, eps, r_grid, rho_grid));

  EmbeddingDiagnostic& d = res.diagnostic;
  d.p = p;
  d.q = q;
  d.n = n;
  d.p_star = p_star;
  d.C = C;
  double G = 0.0;
  for (const auto& gr : grads) G = std::max(G, std::pow(2.0, p) * gradient_energy(gr, p));
  auto lambda_ok = [&](double lam) {
    if (G == 0.0) return true;
    const double lhs = std::log(C) + ((nd - p) * std::log(lam) + std::log(G)) / p;
    const double rhs = std::log(eps) + nd / q * std::log(lam);
    return lhs <= rhs;
  };
  d.lambda = 1.0;
  std::size_t steps = 0;
  while (!lambda_ok(d.lambda) && steps < kLambdaDoublings) {
    d.lambda *= 2.0;
    ++steps;
  }
  d.lambda_capped = !lambda_ok(d.lambda);

  for (std::size_t i = 0; i < F.size(); ++i) {
    MemberEmbedding m;
    m.lhs = std::pow(d.lambda, nd / q) * lp_norm(F[i], q);
    const double inner = std::pow(d.lambda, nd) * lp_norm_pow(F[i].values(), F.grid().cell_volume(), p) +
                         std::pow(d.lambda, nd - p) * gradient_energy(grads[i], p);
    m.rhs = C * std::pow(inner, 1.0 / p);
    m.consistent = m.lhs <= m.rhs;
    d.consistent = d.consistent && m.consistent;
    d.per_member.push_back(m);
  }
  return res;
}

inline RkResult rk_certify(const SobolevFamily& S, double q, double eps, double C) {
  return rk_certify(S, q, eps, C, default_r_grid(S.base.grid()), default_rho_grid(S.base.grid()));
}

}  // namespace compactkit
