#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cgap/error.hpp"
#include "experiment.hpp"

namespace {

using namespace cgap::app;
namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cgap_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmallGroup = R"({
  "profile": {"kind": "power", "alpha": 0.5},
  "family": {"family": "dihedral", "k_range": [1, 3], "orders": [3, 5, 40]},
  "bfs": {"radius_cap": 6, "state_cap": 20000},
  "samples": {"group_pairs": 100, "generator_steps": 50, "aux_sequences": 200},
  "seed": 4
})";

TEST(Config, Defaults) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.radius_cap, 12);
  EXPECT_EQ(c.state_cap, 10'000'000u);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.text, "{}");
}

TEST(Config, Fields) {
  const auto c = parse_config(kSmallGroup);
  EXPECT_EQ(c.family.family, "dihedral");
  EXPECT_EQ(c.family.k_hi, 3);
  EXPECT_EQ(c.family.orders.size(), 3u);
  EXPECT_EQ(c.radius_cap, 6);
  EXPECT_EQ(c.samples.group_pairs, 100u);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(parse_config(R"({"family": {"k_range": [2, 3]}, "members": 5})").family.k_hi, 6);
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config(R"({"sed": 1})"), cgap::Error);
  EXPECT_THROW(parse_config(R"({"bfs": {"radius": 3}})"), cgap::Error);
  EXPECT_THROW(parse_config(R"({"bfs": {"radius_cap": 300}})"), cgap::Error);
  EXPECT_THROW(parse_config(R"({"seed": "one"})"), cgap::Error);
  EXPECT_THROW(parse_config("{"), cgap::Error);
  EXPECT_THROW(parse_config(R"({"family": {"k_range": [3, 1]}})"), cgap::Error);
  EXPECT_THROW(make_profile(ProfileSpec{"cubic"}), cgap::Error);
}

TEST(Commands, ProfileCheck) {
  const auto out = scratch("profile");
  const auto r = run_profile_check(parse_config(R"({"profile": {"kind": "power", "alpha": 0.3}})"), {out});
  EXPECT_TRUE(r.pass());
  const auto j = nlohmann::json::parse(slurp(out / "profile_summary.json"));
  EXPECT_EQ(j["config_text"], R"({"profile": {"kind": "power", "alpha": 0.3}})");
  EXPECT_TRUE(fs::exists(out / "profile_scaling.csv"));
  const auto bad = run_profile_check(parse_config(R"({"profile": {"kind": "power", "alpha": 2}})"), {out});
  EXPECT_FALSE(bad.pass());
}

TEST(Commands, WedgeRefusesProfileOutsideClass) {
  const auto out = scratch("wedge_refuse");
  const auto r = run_wedge(parse_config(R"({"profile": {"kind": "power", "alpha": 2}})"), {out});
  EXPECT_FALSE(r.pass());
  ASSERT_EQ(r.invariants.size(), 1u);
  EXPECT_EQ(r.invariants[0].name, "profile_class_membership");
  EXPECT_FALSE(r.invariants[0].witness.empty());
  EXPECT_FALSE(fs::exists(out / "wedge_pairs.csv"));
}

TEST(Commands, WedgeDeterministic) {
  const std::string cfg = R"({
    "profile": {"kind": "power", "alpha": 0.5},
    "family": {"family": "dihedral", "k_range": [1, 4], "orders": [3, 10, 40, 200]},
    "samples": {"pairs_per_member": 300, "cross_pairs": 300, "eq4_cross_pairs": 500},
    "estimate": {"min_pairs": 100, "min_span": 10}
  })";
  const auto a = scratch("wedge_a"), b = scratch("wedge_b");
  const auto ra = run_wedge(parse_config(cfg), {a, true});
  run_wedge(parse_config(cfg), {b, true});
  for (const auto& f : ra.files) EXPECT_EQ(slurp(f), slurp(b / f.filename())) << f;
  EXPECT_TRUE(fs::exists(a / "wedge_scatter.svg"));
  std::istringstream csv(slurp(a / "wedge_pairs.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "member_a,vertex_a,member_b,vertex_b,d_tau,embed_dist,ratio,rho_of_d");
}

TEST(Commands, DistortionSingleMember) {
  const auto out = scratch("dist_single");
  const auto r =
      run_distortion(parse_config(R"({"family": {"family": "dihedral", "k_range": [1, 1], "orders": [2]}})"), {out});
  EXPECT_TRUE(r.pass());
  const auto j = nlohmann::json::parse(slurp(out / "distortion_summary.json"));
  EXPECT_NE(j["details"]["fit"]["notice"].get<std::string>().find("skipped"), std::string::npos);
  EXPECT_NEAR(j["details"]["members"][0]["sdp_exact"].get<double>(), std::sqrt(2.0), 1e-4);
}

TEST(Commands, DistortionRowsMonotone) {
  const auto out = scratch("dist_rows");
  const auto r = run_distortion(
      parse_config(R"({"family": {"family": "dihedral", "k_range": [1, 4], "orders": [12, 2, 30, 4]}})"), {out});
  EXPECT_TRUE(r.pass());
  std::istringstream csv(slurp(out / "distortion_members.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Commands, GroupVerifyPartialAndTamper) {
  const auto out = scratch("gv");
  auto cfg = parse_config(kSmallGroup);
  cfg.radius_cap = 3;
  const auto r = run_group_verify(cfg, {out});
  EXPECT_TRUE(r.partial);
  EXPECT_TRUE(r.pass());
  const auto j = nlohmann::json::parse(slurp(out / "group_summary.json"));
  EXPECT_TRUE(j["partial"].get<bool>());
  EXPECT_EQ(j["details"]["ball"]["radius_cap"], 3);

  cfg.tamper_mu = 1;
  const auto t = run_group_verify(cfg, {scratch("gv_tamper")});
  EXPECT_FALSE(t.pass());
  EXPECT_EQ(t.invariants[0].name, "member_length_exact");
  EXPECT_FALSE(t.invariants[0].pass);
}

TEST(Commands, GroupVerifyDeterministic) {
  const auto a = scratch("gv_a"), b = scratch("gv_b");
  const auto ra = run_group_verify(parse_config(kSmallGroup), {a});
  run_group_verify(parse_config(kSmallGroup), {b});
  EXPECT_TRUE(ra.pass());
  for (const auto& f : ra.files) EXPECT_EQ(slurp(f), slurp(b / f.filename())) << f;
}

}  // namespace
