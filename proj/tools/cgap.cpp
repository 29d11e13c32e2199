#include <iostream>

#include <CLI11.hpp>

#include "cgap/error.hpp"
#include "experiment.hpp"

namespace {

int report(const cgap::app::CommandResult& r) {
  for (const auto& inv : r.invariants) {
    std::cout << (inv.pass ? "PASS " : "FAIL ") << inv.name;
    for (const auto& [k, v] : inv.measured) std::cout << ' ' << k << '=' << v;
    std::cout << "  [" << inv.witness << "]\n";
    if (!inv.note.empty()) std::cout << "     " << inv.note << '\n';
  }
  if (r.partial) std::cout << "partial report: budget limits reached\n";
  for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compression experiments on expander wedges and amalgamated groups"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool svg = false;
  int tamper_mu = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "RNG seed, overrides the config");
    sub->add_option("--out", out_dir, "output directory, overrides the config");
    sub->add_flag("--svg", svg, "write a log-log scatter plot");
  };
  auto* wedge = app.add_subcommand("wedge", "two-sided bound and compression slope on a wedge of Cayley graphs");
  auto* distortion = app.add_subcommand("distortion", "Hilbert distortion sandwich per family member");
  auto* group = app.add_subcommand("group-verify", "normal-form and embedding checks on the amalgamated group");
  auto* profile = app.add_subcommand("profile-check", "class membership and scaling sequence of a profile");
  for (auto* s : {wedge, distortion, group, profile}) add_common(s);
  group->add_option("--tamper-mu", tamper_mu, "debug: add this to every mu in the length prediction");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = cgap::app::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.output = out_dir;
    cfg.tamper_mu = tamper_mu;
    const cgap::app::RunOptions opt{cfg.output, svg};
    if (*wedge) return report(cgap::app::run_wedge(cfg, opt));
    if (*distortion) return report(cgap::app::run_distortion(cfg, opt));
    if (*group) return report(cgap::app::run_group_verify(cfg, opt));
    return report(cgap::app::run_profile_check(cfg, opt));
  } catch (const cgap::Error& e) {
    std::cerr << "error (" << config_path << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error (" << config_path << "): " << e.what() << '\n';
    return 2;
  }
}
