#pragma once

// Experiment configuration and the four commands behind the CLI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgap/group_core.hpp"
#include "cgap/profile.hpp"

namespace cgap::app {

struct ProfileSpec {
  std::string kind = "power";
  double alpha = 0.5;
  double beta = 2.0;
  double gamma = 1.0;
  std::vector<std::pair<double, double>> points;
};

struct SampleSizes {
  std::size_t pairs_per_member = 200;
  std::size_t cross_pairs = 400;
  std::size_t eq4_cross_pairs = 10000;
  std::size_t group_pairs = 1000;
  std::size_t generator_steps = 1000;
  std::size_t aux_sequences = 10000;
  std::size_t aux_max_length = 50;
};

struct ExperimentConfig {
  std::string text;  // the config file, echoed verbatim into every summary
  ProfileSpec profile;
  GroupFamilySpec family;
  int radius_cap = 12;
  std::size_t state_cap = 10'000'000;
  SampleSizes samples;
  double slope_tolerance = 0.1;
  double estimate_cutoff = 10.0;
  std::size_t estimate_min_pairs = 1000;
  double estimate_min_span = 100.0;
  std::size_t sdp_cap = 8;
  std::size_t spectrum_cap = 500'000;
  std::size_t all_pairs_cap = 6000;
  double aux_ceiling = 10.0;
  std::uint64_t seed = 1;
  std::string output = "out";
  int tamper_mu = 0;  // debug fault injection, never read from the file
};

/// Parses a JSON config; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

CompressionProfile make_profile(const ProfileSpec& spec);

struct Invariant {
  std::string name;
  bool pass = false;
  std::map<std::string, double> measured;
  std::string witness;  // "<file>#<row>" or a literal description
  std::string note;
};

struct CommandResult {
  std::string command;
  std::vector<Invariant> invariants;
  std::vector<std::filesystem::path> files;
  bool partial = false;
  bool pass() const {
    for (const auto& i : invariants)
      if (!i.pass) return false;
    return !invariants.empty();
  }
};

struct RunOptions {
  std::filesystem::path out_dir;
  bool svg = false;
};

CommandResult run_profile_check(const ExperimentConfig& cfg, const RunOptions& opt);
CommandResult run_wedge(const ExperimentConfig& cfg, const RunOptions& opt);
CommandResult run_distortion(const ExperimentConfig& cfg, const RunOptions& opt);
CommandResult run_group_verify(const ExperimentConfig& cfg, const RunOptions& opt);

}  // namespace cgap::app
