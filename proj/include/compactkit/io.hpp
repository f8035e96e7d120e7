#pragma once

// Manifest loading and report serialization.
//
// Grid-function manifest:
//   {"version":1, "dim":n, "shape":[...], "origin":[...], "spacing":h,
//    "values": "<path to raw little-endian binary64>" | [inline array]}
// Family manifest:
//   {"version":1, "members":[{"label":..., "manifest": "<path>" | {...}}, ...]}
// Relative paths resolve against the directory of the manifest naming them.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "compactkit/bv_helly.hpp"
#include "compactkit/classical.hpp"
#include "compactkit/cover.hpp"
#include "compactkit/fourier.hpp"
#include "compactkit/grid.hpp"
#include "compactkit/moduli.hpp"
#include "compactkit/sobolev.hpp"

namespace compactkit {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace detail {

inline json read_json_file(const fs::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + what + " '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, what + " '" + path.string() + "': " + e.what());
  }
}

inline std::vector<double> read_binary64(const fs::path& path, std::size_t expected, const std::string& label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "member '" + label + "': cannot open payload '" + path.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() != expected * sizeof(double))
    throw Error(ErrorCode::size_mismatch, "member '" + label + "': payload has " + std::to_string(bytes.size()) +
                                              " bytes, expected " + std::to_string(expected * sizeof(double)));
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint64_t raw;
    std::memcpy(&raw, bytes.data() + i * sizeof(double), sizeof(raw));
    if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap64(raw);
    out[i] = std::bit_cast<double>(raw);
  }
  return out;
}

inline void write_binary64(const fs::path& path, std::span<const double> values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path.string() + "'");
  for (double v : values) {
    auto raw = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap64(raw);
    out.write(reinterpret_cast<const char*>(&raw), sizeof(raw));
  }
}

template <class T>
T field(const json& j, const char* key, const std::string& label) {
  if (!j.contains(key)) throw Error(ErrorCode::parse_error, "member '" + label + "': missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, "member '" + label + "': key '" + key + "': " + e.what());
  }
}

inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace detail

inline GridFunction parse_grid_function(const json& m, const fs::path& base_dir, const std::string& label = "") {
  if (!m.is_object()) throw Error(ErrorCode::parse_error, "member '" + label + "': manifest must be an object");
  if (detail::field<int>(m, "version", label) != 1)
    throw Error(ErrorCode::parse_error, "member '" + label + "': unsupported manifest version");
  const auto dim = detail::field<std::size_t>(m, "dim", label);
  auto shape = detail::field<std::vector<std::size_t>>(m, "shape", label);
  auto origin = detail::field<std::vector<double>>(m, "origin", label);
  const auto spacing = detail::field<double>(m, "spacing", label);
  if (shape.size() != dim || origin.size() != dim)
    throw Error(ErrorCode::parse_error, "member '" + label + "': shape/origin length differs from dim");
  Grid grid = [&] {
    try {
      return Grid(std::move(shape), std::move(origin), spacing);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_error, "member '" + label + "': " + e.what());
    }
  }();

  if (!m.contains("values")) throw Error(ErrorCode::parse_error, "member '" + label + "': missing key 'values'");
  const json& v = m.at("values");
  std::vector<double> values;
  if (v.is_string()) {
    fs::path p = v.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    values = detail::read_binary64(p, grid.size(), label);
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) throw Error(ErrorCode::non_finite_value, "member '" + label + "': non-numeric inline value");
      values.push_back(x.get<double>());
    }
    if (values.size() != grid.size())
      throw Error(ErrorCode::size_mismatch, "member '" + label + "': " + std::to_string(values.size()) +
                                                " inline values for " + std::to_string(grid.size()) + " cells");
  } else {
    throw Error(ErrorCode::parse_error, "member '" + label + "': 'values' must be a path or an array");
  }
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw Error(ErrorCode::non_finite_value, "member '" + label + "': value " + std::to_string(i) + " is not finite");
  return GridFunction(std::move(grid), std::move(values));
}

inline GridFunction load_grid_function(const fs::path& path, const std::string& label = "") {
  return parse_grid_function(detail::read_json_file(path, "manifest"), path.parent_path(), label);
}

inline FunctionFamily load_family(const fs::path& path) {
  const json doc = detail::read_json_file(path, "family manifest");
  if (!doc.is_object() || !doc.contains("members") || !doc.at("members").is_array())
    throw Error(ErrorCode::parse_error, "family manifest needs a 'members' array");
  if (!doc.contains("version") || doc.at("version") != 1)
    throw Error(ErrorCode::parse_error, "unsupported family manifest version");
  std::vector<GridFunction> members;
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& entry : doc.at("members")) {
    const std::string label = entry.contains("label") && entry.at("label").is_string()
                                  ? entry.at("label").get<std::string>()
                                  : "#" + std::to_string(labels.size());
    if (!entry.contains("label") || !entry.at("label").is_string())
      throw Error(ErrorCode::parse_error, "member '" + label + "': missing string 'label'");
    if (!seen.insert(label).second) throw Error(ErrorCode::parse_error, "duplicate member label '" + label + "'");
    if (!entry.contains("manifest")) throw Error(ErrorCode::parse_error, "member '" + label + "': missing 'manifest'");
    const json& m = entry.at("manifest");
    if (m.is_string()) {
      fs::path p = m.get<std::string>();
      if (p.is_relative()) p = path.parent_path() / p;
      members.push_back(load_grid_function(p, label));
    } else {
      members.push_back(parse_grid_function(m, path.parent_path(), label));
    }
    labels.push_back(label);
  }
  return FunctionFamily(std::move(members), std::move(labels));
}

inline json grid_manifest(const Grid& g) {
  return {{"version", 1}, {"dim", g.dim()}, {"shape", g.shape()}, {"origin", g.origin()}, {"spacing", g.spacing()}};
}

/// Writes `<dir>/<label>.json` plus `<dir>/<label>.f64`, and `<dir>/family.json`.
inline fs::path save_family(const FunctionFamily& F, const fs::path& dir) {
  fs::create_directories(dir);
  json members = json::array();
  for (std::size_t i = 0; i < F.size(); ++i) {
    const std::string stem = F.label(i);
    detail::write_binary64(dir / (stem + ".f64"), F[i].values());
    json m = grid_manifest(F[i].grid());
    m["values"] = stem + ".f64";
    std::ofstream(dir / (stem + ".json")) << m.dump(2) << '\n';
    members.push_back({{"label", F.label(i)}, {"manifest", stem + ".json"}});
  }
  const fs::path family = dir / "family.json";
  std::ofstream(family) << json{{"version", 1}, {"members", members}}.dump(2) << '\n';
  return family;
}

/// Write-temp-then-rename.
inline void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw Error(ErrorCode::io_error, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot rename onto '" + path.string() + "': " + ec.message());
}

// ---- reports ----

inline json to_json(const ModuliReport& r) {
  auto profile = [](const std::vector<ProfilePoint>& pts, const char* at) {
    json a = json::array();
    for (const auto& pt : pts) a.push_back({{at, pt.at}, {"sup", pt.sup}, {"argmax", pt.argmax}});
    return a;
  };
  return {{"p", r.p},
          {"epsilon", r.epsilon},
          {"norm_bound", r.norm_bound},
          {"tail_profile", profile(r.tail_profile, "R")},
          {"translation_profile", profile(r.translation_profile, "rho")},
          {"tail_radius", detail::optional_json(r.tail_radius)},
          {"translation_rho", detail::optional_json(r.translation_rho)},
          {"translation_modulus_kind", "lattice"},
          {"tail_region", "cell centre |x| > R"}};
}

inline json to_json(const CoverCertificate& c, const std::vector<std::string>& labels) {
  json centers = json::array();
  for (auto i : c.centers) centers.push_back(labels.at(i));
  json assignment = json::object();
  for (std::size_t i = 0; i < c.assignment.size(); ++i) assignment[labels.at(i)] = labels.at(c.center_of(i));
  json out = {{"epsilon", c.epsilon},
              {"radius", c.radius},
              {"centers", centers},
              {"assignment", assignment},
              {"verified_max_distance", c.verified_max_distance}};
  if (c.pipeline)
    out["pipeline"] = {{"R", c.pipeline->R},
                       {"rho", c.pipeline->rho},
                       {"cube_side_cells", c.pipeline->cube_side_cells},
                       {"cube_count", c.pipeline->cube_count}};
  return out;
}

inline json to_json(const SpectralReport& s) {
  return {{"M", s.M},
          {"rho", s.rho},
          {"y_bound", detail::number_or_null(s.y_bound)},
          {"trivial", s.trivial},
          {"per_member_tails", s.per_member_tails},
          {"shifts_checked", s.shifts_checked},
          {"max_checked_defect", s.max_checked_defect},
          {"torus_discrepancy", s.torus_discrepancy}};
}

inline json to_json(const SelectionResult& s) {
  return {{"indices", s.indices},
          {"tau", s.tau},
          {"l1_bound", s.l1_bound},
          {"bins_per_point", s.bins_per_point},
          {"v_bins", s.v_bins},
          {"w_bins", s.w_bins}};
}

inline json to_json(const EmbeddingDiagnostic& d) {
  json members = json::array();
  for (const auto& m : d.per_member)
    members.push_back({{"lhs", detail::number_or_null(m.lhs)},
                       {"rhs", detail::number_or_null(m.rhs)},
                       {"consistent", m.consistent}});
  return {{"p", d.p},           {"q", d.q},
          {"n", d.n},           {"p_star", d.p_star},
          {"C", d.C},           {"lambda", d.lambda},
          {"lambda_capped", d.lambda_capped},
          {"consistent", d.consistent},
          {"per_member", members}};
}

inline json to_json(const SequenceFamily& s) { return {{"p", s.p}, {"members", s.members}}; }

inline SequenceFamily sequence_family_from_json(const json& j) {
  try {
    SequenceFamily s{j.at("members").get<std::vector<std::vector<double>>>(), j.at("p").get<double>()};
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("sequence family: ") + e.what());
  }
}

inline json to_json(const DiscreteMetricFamily& d) { return {{"distance", d.distance}, {"members", d.members}}; }

inline DiscreteMetricFamily metric_family_from_json(const json& j) {
  try {
    DiscreteMetricFamily d{j.at("distance").get<std::vector<std::vector<double>>>(),
                           j.at("members").get<std::vector<std::vector<double>>>()};
    d.validate();
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("metric family: ") + e.what());
  }
}

}  // namespace compactkit
