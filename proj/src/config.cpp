#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cgap/error.hpp"
#include "experiment.hpp"

namespace cgap::app {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::kParse, where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw Error(ErrorKind::kParse, "unknown key \"" + key + "\" in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

ProfileSpec parse_profile(const json& j) {
  reject_unknown(j, {"kind", "alpha", "beta", "gamma", "points"}, "profile");
  ProfileSpec p;
  read(j, "kind", p.kind);
  read(j, "alpha", p.alpha);
  read(j, "beta", p.beta);
  read(j, "gamma", p.gamma);
  if (j.contains("points"))
    for (const auto& pt : j.at("points")) {
      if (!pt.is_array() || pt.size() != 2) throw Error(ErrorKind::kParse, "grid points are [x, rho] pairs");
      p.points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
  return p;
}

GroupFamilySpec parse_family(const json& j, const std::filesystem::path& base) {
  reject_unknown(j,
                 {"family", "k_range", "size_cap", "dense_cap", "n_offset", "degrees", "generator_count", "generators",
                  "generator_seed", "orders", "table_files"},
                 "family");
  GroupFamilySpec f;
  read(j, "family", f.family);
  if (j.contains("k_range")) {
    const auto& r = j.at("k_range");
    if (!r.is_array() || r.size() != 2) throw Error(ErrorKind::kParse, "k_range is [k_lo, k_hi]");
    f.k_lo = r[0].get<int>();
    f.k_hi = r[1].get<int>();
    if (f.k_hi < f.k_lo) throw Error(ErrorKind::kParse, "k_range is empty");
  }
  read(j, "size_cap", f.size_cap);
  read(j, "dense_cap", f.dense_cap);
  read(j, "n_offset", f.n_offset);
  read(j, "degrees", f.degrees);
  read(j, "generator_count", f.generator_count);
  read(j, "generators", f.generators);
  read(j, "generator_seed", f.generator_seed);
  read(j, "orders", f.orders);
  read(j, "table_files", f.table_files);
  for (auto& t : f.table_files)
    if (std::filesystem::path(t).is_relative()) t = (base / t).string();
  return f;
}

ExperimentConfig parse(const std::string& text, const std::filesystem::path& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"profile", "family", "members", "bfs", "samples", "estimate", "distortion", "all_pairs_cap",
                  "aux_ceiling", "seed", "output", "slope_tolerance"},
                 "config");
  ExperimentConfig c;
  c.text = text;
  try {
    if (j.contains("profile")) c.profile = parse_profile(j.at("profile"));
    if (j.contains("family")) c.family = parse_family(j.at("family"), base);
    if (j.contains("members")) {
      const int n = j.at("members").get<int>();
      if (n < 1) throw Error(ErrorKind::kParse, "members must be positive");
      c.family.k_hi = c.family.k_lo + n - 1;
    }
    if (j.contains("bfs")) {
      const auto& b = j.at("bfs");
      reject_unknown(b, {"radius_cap", "state_cap"}, "bfs");
      read(b, "radius_cap", c.radius_cap);
      read(b, "state_cap", c.state_cap);
    }
    if (j.contains("samples")) {
      const auto& s = j.at("samples");
      reject_unknown(s,
                     {"pairs_per_member", "cross_pairs", "eq4_cross_pairs", "group_pairs", "generator_steps",
                      "aux_sequences", "aux_max_length"},
                     "samples");
      read(s, "pairs_per_member", c.samples.pairs_per_member);
      read(s, "cross_pairs", c.samples.cross_pairs);
      read(s, "eq4_cross_pairs", c.samples.eq4_cross_pairs);
      read(s, "group_pairs", c.samples.group_pairs);
      read(s, "generator_steps", c.samples.generator_steps);
      read(s, "aux_sequences", c.samples.aux_sequences);
      read(s, "aux_max_length", c.samples.aux_max_length);
    }
    if (j.contains("estimate")) {
      const auto& e = j.at("estimate");
      reject_unknown(e, {"cutoff", "min_pairs", "min_span"}, "estimate");
      read(e, "cutoff", c.estimate_cutoff);
      read(e, "min_pairs", c.estimate_min_pairs);
      read(e, "min_span", c.estimate_min_span);
    }
    if (j.contains("distortion")) {
      const auto& d = j.at("distortion");
      reject_unknown(d, {"sdp_cap", "spectrum_cap"}, "distortion");
      read(d, "sdp_cap", c.sdp_cap);
      read(d, "spectrum_cap", c.spectrum_cap);
    }
    read(j, "all_pairs_cap", c.all_pairs_cap);
    read(j, "aux_ceiling", c.aux_ceiling);
    read(j, "seed", c.seed);
    read(j, "output", c.output);
    read(j, "slope_tolerance", c.slope_tolerance);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config field has the wrong type: ") + e.what());
  }
  if (c.radius_cap < 0 || c.radius_cap > 255) throw Error(ErrorKind::kParse, "bfs.radius_cap must be in [0, 255]");
  return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) { return parse(json_text, std::filesystem::current_path()); }

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path());
}

CompressionProfile make_profile(const ProfileSpec& spec) {
  switch (profile_kind_from_string(spec.kind)) {
    case ProfileKind::kPower: return CompressionProfile::power(spec.alpha);
    case ProfileKind::kLog: return CompressionProfile::log();
    case ProfileKind::kLogLog: return CompressionProfile::loglog();
    case ProfileKind::kXOverLogBeta: return CompressionProfile::x_over_logbeta(spec.beta);
    case ProfileKind::kPowerOverLogGamma: return CompressionProfile::power_over_loggamma(spec.alpha, spec.gamma);
    case ProfileKind::kGrid: return CompressionProfile::grid(spec.points);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown profile kind " + spec.kind);
}

}  // namespace cgap::app
