#pragma once

// Batch front end. Exit status: 0 certified/computed, 2 not certified at the
// tabulated resolution, 1 error. Every report embeds the full configuration.

#include <algorithm>
#include <chrono>
#include <ctime>
#include <optional>
#include <string>
#include <vector>

#include "compactkit/bv_helly.hpp"
#include "compactkit/cover.hpp"
#include "compactkit/fourier.hpp"
#include "compactkit/io.hpp"
#include "compactkit/kolmogorov.hpp"
#include "compactkit/moduli.hpp"
#include "compactkit/sobolev.hpp"

namespace compactkit {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitStatus : int { exit_ok = 0, exit_error = 1, exit_not_certified = 2 };

struct RunConfig {
  std::string command;
  std::string family_path;
  double p = 2.0;
  std::optional<double> q;
  std::optional<double> epsilon;
  std::optional<double> tau;
  std::vector<double> r_grid;
  std::vector<double> rho_grid;
  std::string output_path;
  double embedding_constant = 1.0;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"moduli", "cover", "certify", "fourier", "helly", "sobolev"};
  return names;
}

inline json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"family", c.family_path},
          {"p", c.p},
          {"q", detail::optional_json(c.q)},
          {"epsilon", detail::optional_json(c.epsilon)},
          {"tau", detail::optional_json(c.tau)},
          {"r_grid", c.r_grid},
          {"rho_grid", c.rho_grid},
          {"output", c.output_path},
          {"embedding_constant", c.embedding_constant}};
}

struct RunOutcome {
  int exit_code = exit_ok;
  json report;
};

namespace detail {

inline double require_epsilon(const RunConfig& c) {
  if (!c.epsilon) throw Error(ErrorCode::invalid_argument, "--epsilon is required for '" + c.command + "'");
  check_epsilon(*c.epsilon);
  return *c.epsilon;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json dispatch(const RunConfig& c, json& diagnostic) {
  check_exponent(c.p);
  if (std::find(commands().begin(), commands().end(), c.command) == commands().end())
    throw Error(ErrorCode::invalid_argument, "unknown command '" + c.command + "'");
  if (c.command == "fourier" && c.p != 2.0)
    throw Error(ErrorCode::exponent_error, "the Fourier criterion is an L^2 criterion; got p = " + std::to_string(c.p));

  const FunctionFamily F = load_family(c.family_path);
  const auto r_grid = c.r_grid.empty() ? default_r_grid(F.grid()) : c.r_grid;

  if (c.command == "moduli") {
    const double eps = require_epsilon(c);
    const auto rho = c.rho_grid.empty() ? default_rho_grid(F.grid()) : c.rho_grid;
    return to_json(family_moduli(F, c.p, eps, r_grid, rho));
  }
  if (c.command == "cover") {
    const double eps = require_epsilon(c);
    auto cert = greedy_cover(F, c.p, eps);
    json out = to_json(cert, F.labels());
    out["covering_number_upper_bound"] = cert.center_count();
    return out;
  }
  if (c.command == "certify") {
    const double eps = require_epsilon(c);
    const auto rho = c.rho_grid.empty() ? default_rho_grid(F.grid()) : c.rho_grid;
    const auto moduli = family_moduli(F, c.p, eps, r_grid, rho);
    diagnostic["moduli"] = to_json(moduli);
    json out = to_json(kr_certify(F, c.p, eps, moduli), F.labels());
    out["moduli"] = diagnostic["moduli"];
    return out;
  }
  if (c.command == "fourier") {
    const double eps = require_epsilon(c);
    const auto freq = c.rho_grid.empty() ? default_frequency_grid(F.grid()) : c.rho_grid;
    return to_json(pego_certify(F, eps, freq));
  }
  if (c.command == "helly") {
    if (!c.tau) throw Error(ErrorCode::invalid_argument, "--tau is required for 'helly'");
    std::vector<BVFunction> seq;
    double M = 0.0;
    for (const auto& f : F.members()) {
      seq.emplace_back(f);
      M = std::max({M, seq.back().tv(), seq.back().sup_norm()});
    }
    json out = to_json(helly_select(seq, *c.tau, M));
    out["M"] = M;
    json labels = json::array();
    for (auto i : out["indices"]) labels.push_back(F.label(i.get<std::size_t>()));
    out["labels"] = labels;
    return out;
  }
  // sobolev
  const double eps = require_epsilon(c);
  const double q = c.q.value_or(c.p);
  const auto rho = c.rho_grid.empty() ? default_rho_grid(F.grid()) : c.rho_grid;
  const auto S = wkp_family_reduce(F, 1, c.p);
  const auto res = rk_certify(S, q, eps, c.embedding_constant, r_grid, rho);
  return {{"certificate", to_json(res.certificate, F.labels())},
          {"embedding", to_json(res.diagnostic)},
          {"joint_tail_radius", res.joint_tail_radius}};
}

}  // namespace detail

/// Runs a command and builds its report without touching the filesystem output.
inline RunOutcome execute(const RunConfig& config) {
  RunOutcome out;
  json& rep = out.report;
  rep["tool"] = "compactkit";
  rep["version"] = kToolVersion;
  rep["command"] = config.command;
  rep["config"] = to_json(config);
  rep["generated_at"] = detail::utc_timestamp();
  json diagnostic = json::object();
  try {
    rep["result"] = detail::dispatch(config, diagnostic);
    rep["status"] = (config.command == "moduli" || config.command == "cover" || config.command == "helly")
                        ? "computed"
                        : "certified";
    out.exit_code = exit_ok;
  } catch (const Error& e) {
    if (e.is_resolution_verdict()) {
      rep["status"] = "not_certified";
      out.exit_code = exit_not_certified;
    } else {
      rep["status"] = "error";
      out.exit_code = exit_error;
    }
    rep["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    rep["status"] = "error";
    rep["error"] = {{"code", "internal"}, {"message", e.what()}};
    out.exit_code = exit_error;
  }
  if (!diagnostic.empty()) rep["diagnostic"] = diagnostic;
  rep["exit_code"] = out.exit_code;
  return out;
}

/// execute() plus an atomic write of the report to config.output_path.
inline RunOutcome run(const RunConfig& config) {
  RunOutcome out = execute(config);
  if (!config.output_path.empty()) {
    try {
      atomic_write(config.output_path, out.report.dump(2) + "\n");
    } catch (const Error& e) {
      out.report["status"] = "error";
      out.report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
      out.exit_code = exit_error;
    }
  }
  return out;
}

}  // namespace compactkit
