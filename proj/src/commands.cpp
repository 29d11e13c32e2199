#include <algorithm>
#include <cmath>
#include <iostream>

#include "cgap/distortion.hpp"
#include "cgap/embed.hpp"
#include "cgap/ggroup.hpp"
#include "cgap/verify.hpp"
#include "cgap/wedge.hpp"
#include "experiment.hpp"
#include "report.hpp"

namespace cgap::app {
namespace {

using nlohmann::ordered_json;

std::filesystem::path prepare(const RunOptions& opt) {
  std::filesystem::create_directories(opt.out_dir);
  return opt.out_dir;
}

Invariant membership_invariant(const MembershipReport& m) {
  Invariant inv;
  inv.name = "profile_class_membership";
  inv.pass = m.pass();
  inv.measured["a_star"] = m.a_star;
  inv.measured["x_end"] = m.x_end;
  for (const auto& c : m.conditions)
    if (!c.pass && inv.witness.empty()) inv.witness = c.name + ": " + c.first_violation;
  if (inv.witness.empty()) inv.witness = "all conditions hold on [a_star, x_end]";
  return inv;
}

ordered_json membership_json(const MembershipReport& m) {
  ordered_json j;
  j["a_star"] = m.a_star;
  j["x_end"] = m.x_end;
  j["pass"] = m.pass();
  auto& cs = j["conditions"] = ordered_json::array();
  for (const auto& c : m.conditions)
    cs.push_back({{"name", c.name},
                  {"pass", c.pass},
                  {"first_violation", c.first_violation},
                  {"advisory_violations", c.advisory_violations}});
  return j;
}

std::vector<double> family_orders(const GroupFamilySpec& spec) {
  std::vector<double> v;
  for (int k = spec.k_lo; k <= spec.k_hi; ++k) v.push_back(static_cast<double>(required_order(spec, k)));
  return v;
}

void write_scaling_csv(const std::filesystem::path& path, const ScalingSequence& seq) {
  CsvWriter csv(path, {"k", "v", "ln_v", "lambda", "m", "mu", "selected"});
  for (const auto& e : seq.entries) {
    csv << e.k << e.v << e.y << e.lambda << e.m << e.mu << (e.selected ? 1 : 0);
    csv.end_row();
  }
}

}  // namespace

// ---------------------------------------------------------------------------

CommandResult run_profile_check(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto dir = prepare(opt);
  CommandResult res;
  res.command = "profile-check";
  const auto rho = make_profile(cfg.profile);
  const auto membership = check_class_membership(rho);
  res.invariants.push_back(membership_invariant(membership));
  ordered_json details;
  details["profile"] = rho.describe();
  details["membership"] = membership_json(membership);
  if (!membership.pass()) {
    write_summary(dir / "profile_summary.json", cfg, res, details);
    res.files.push_back(dir / "profile_summary.json");
    return res;
  }

  const auto seq = scaling_sequence(rho, family_orders(cfg.family));
  write_scaling_csv(dir / "profile_scaling.csv", seq);
  res.files.push_back(dir / "profile_scaling.csv");

  const auto ratio = ratio_constant(rho, seq, membership.a_star, membership.x_end);
  Invariant r;
  r.name = "ratio_constant_finite";
  r.pass = ratio.pass;
  r.measured["c"] = ratio.c;
  r.measured["c1"] = ratio.c1;
  r.measured["theta"] = ratio.theta;
  r.measured["max_selected_ratio"] = ratio.measured_max_ratio;
  r.witness = "profile_scaling.csv";
  res.invariants.push_back(r);

  details["ratio_constant"] = {{"c", ratio.c},
                               {"c1", ratio.c1},
                               {"theta", ratio.theta},
                               {"measured_max_ratio", ratio.measured_max_ratio},
                               {"pass", ratio.pass}};
  write_summary(dir / "profile_summary.json", cfg, res, details);
  res.files.push_back(dir / "profile_summary.json");
  return res;
}

// ---------------------------------------------------------------------------

CommandResult run_wedge(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto dir = prepare(opt);
  CommandResult res;
  res.command = "wedge";
  const auto rho = make_profile(cfg.profile);
  const auto membership = check_class_membership(rho);
  ordered_json details;
  details["profile"] = rho.describe();
  details["membership"] = membership_json(membership);
  if (!membership.pass()) {
    res.invariants.push_back(membership_invariant(membership));
    write_summary(dir / "wedge_summary.json", cfg, res, details);
    res.files.push_back(dir / "wedge_summary.json");
    return res;
  }

  const auto groups = build_family(cfg.family);
  const auto w = build_wedge(groups, rho, cfg.all_pairs_cap);
  const double d_const = w.diameter_constant();

  auto& members = details["members"] = ordered_json::array();
  {
    CsvWriter csv(dir / "wedge_members.csv", {"member", "group", "v", "diameter", "ln_v", "lambda"});
    for (std::size_t n = 0; n < w.size(); ++n) {
      const auto& m = w.member(n);
      csv << n << m.group->label() << m.group->order() << m.metric->diameter() << m.y << m.lambda;
      csv.end_row();
      members.push_back({{"group", m.group->label()}, {"v", m.group->order()}, {"lambda", m.lambda}});
    }
    res.files.push_back(csv.path());
  }

  // Two-sided bound
  const auto eq4 = verify_eq4(w, rho, d_const, Eq4Options{cfg.samples.eq4_cross_pairs, cfg.seed});
  {
    CsvWriter csv(dir / "wedge_bounds.csv",
                  {"d_const", "same_pairs", "cross_pairs", "upper_violations", "lower_violations",
                   "subadditivity_violations", "worst_upper_slack", "worst_lower_slack", "first_violation"});
    csv << eq4.d_const << eq4.same_pairs << eq4.cross_pairs << eq4.upper_violations << eq4.lower_violations
        << eq4.subadditivity_violations << eq4.worst_upper_slack << eq4.worst_lower_slack << eq4.first_violation;
    csv.end_row();
    res.files.push_back(csv.path());
    Invariant inv;
    inv.name = "wedge_two_sided_bound";
    inv.pass = eq4.pass();
    inv.measured["d_const"] = eq4.d_const;
    inv.measured["same_pairs"] = static_cast<double>(eq4.same_pairs);
    inv.measured["cross_pairs"] = static_cast<double>(eq4.cross_pairs);
    inv.measured["violations"] =
        static_cast<double>(eq4.upper_violations + eq4.lower_violations + eq4.subadditivity_violations);
    inv.measured["worst_upper_slack"] = eq4.worst_upper_slack;
    inv.measured["worst_lower_slack"] = eq4.worst_lower_slack;
    inv.witness = eq4.first_violation.empty() ? witness(csv, 0) : eq4.first_violation;
    res.invariants.push_back(inv);
  }

  // Compression slope
  const auto pairs = sample_pairs(w, SampleOptions{cfg.samples.pairs_per_member, cfg.samples.cross_pairs, cfg.seed});
  const PairOracle oracle = [&w](const WedgeVertex& a, const WedgeVertex& b) { return dirac_distance(w, a, b); };
  ScatterSeries points{"pairs", "#1f77b4", {}, false};
  {
    CsvWriter csv(dir / "wedge_pairs.csv", {"member_a", "vertex_a", "member_b", "vertex_b", "d_tau", "embed_dist",
                                            "ratio", "rho_of_d"});
    for (const auto& [a, b] : pairs) {
      const double d = wedge_distance(w, a, b);
      const double e = oracle(a, b);
      csv << a.member << static_cast<long long>(a.element) << b.member << static_cast<long long>(b.element) << d << e
          << (d > 0 ? e / d : 0.0) << (d > 0 ? rho.rho(std::max(d, 1.0)) : 0.0);
      csv.end_row();
      points.points.emplace_back(d, e);
    }
    res.files.push_back(csv.path());
  }
  Invariant slope;
  slope.name = "compression_slope";
  slope.witness = "wedge_pairs.csv";
  try {
    const auto est = estimate_compression(
        w, oracle, pairs, EstimateOptions{cfg.estimate_cutoff, cfg.estimate_min_pairs, cfg.estimate_min_span});
    slope.measured["slope"] = est.slope;
    slope.measured["intercept"] = est.intercept;
    slope.measured["inf_exponent"] = est.inf_exponent;
    slope.measured["span"] = est.span;
    slope.measured["pairs"] = static_cast<double>(est.pairs);
    slope.measured["tolerance"] = cfg.slope_tolerance;
    if (cfg.profile.kind == "power") {
      slope.measured["alpha"] = cfg.profile.alpha;
      slope.pass = std::abs(est.slope - cfg.profile.alpha) <= cfg.slope_tolerance;
      slope.note = "finite-size tolerance: slope within alpha +/- " + num(cfg.slope_tolerance);
    } else {
      slope.pass = std::isfinite(est.slope);
      slope.note = "no exponent target for this profile kind; slope reported only";
    }
    details["estimate"] = {{"slope", est.slope},
                           {"intercept", est.intercept},
                           {"inf_exponent", est.inf_exponent},
                           {"span", est.span},
                           {"pairs", est.pairs}};
    if (opt.svg) {
      ScatterSeries fit{"fit slope " + num(est.slope), "#d62728", {}, true};
      double lo = INFINITY, hi = 0;
      for (const auto& [x, y] : points.points)
        if (x > 0) lo = std::min(lo, x), hi = std::max(hi, x);
      for (const double x : {lo, hi}) fit.points.emplace_back(x, std::exp(est.intercept + est.slope * std::log(x)));
      write_svg_scatter(dir / "wedge_scatter.svg", "wedge compression", "d_tau", "embedding distance",
                        {points, fit});
      res.files.push_back(dir / "wedge_scatter.svg");
    }
  } catch (const Error& e) {
    slope.pass = false;
    slope.note = e.what();
  }
  res.invariants.push_back(slope);

  write_summary(dir / "wedge_summary.json", cfg, res, details);
  res.files.push_back(dir / "wedge_summary.json");
  return res;
}

// ---------------------------------------------------------------------------

CommandResult run_distortion(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto dir = prepare(opt);
  CommandResult res;
  res.command = "distortion";
  const auto groups = build_family(cfg.family);
  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return groups[a]->order() < groups[b]->order(); });

  struct Row {
    DistortionReport r;
    bool spectral = true;
  };
  std::vector<Row> rows;
  for (const auto i : order) {
    const CayleyGraph graph(groups[i]);
    const auto wm = word_metric(graph, cfg.all_pairs_cap);
    Row row;
    if (graph.vertex_count() <= cfg.spectrum_cap) {
      const auto stats = spectrum(graph, wm, SpectrumOptions{cfg.family.dense_cap});
      row.r = distortion_report(graph, wm, stats, cfg.sdp_cap);
    } else {
      row.spectral = false;
      row.r.graph_id = groups[i]->label();
      row.r.n = graph.vertex_count();
      row.r.m = graph.degree();
      row.r.diameter = wm.diameter();
      row.r.upper = wm.diameter();
      row.r.lower = NAN;
    }
    rows.push_back(std::move(row));
  }

  CsvWriter csv(dir / "distortion_members.csv",
                {"graph_id", "n", "m", "diameter", "ln_v", "lambda2", "poincare_C", "poincare_certificate_gap", "kappa",
                 "far_fraction", "poincare_lower", "canonical_upper", "sdp_exact", "sandwich_ok"});
  std::size_t bad = 0, first_bad = SIZE_MAX;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i].r;
    const bool ok = !rows[i].spectral || r.sandwich_ok();
    if (!ok && bad++ == 0) first_bad = i;
    csv << r.graph_id << r.n << r.m << r.diameter << std::log(static_cast<double>(r.n));
    if (rows[i].spectral)
      csv << r.lambda2 << r.poincare_C << r.poincare_certificate_gap << r.kappa << r.far_fraction << r.lower;
    else
      csv << std::string() << std::string() << std::string() << std::string() << std::string() << std::string();
    csv << r.upper << (r.sdp ? num(*r.sdp) : std::string()) << (ok ? 1 : 0);
    csv.end_row();
  }
  res.files.push_back(csv.path());

  Invariant sandwich;
  sandwich.name = "distortion_sandwich";
  sandwich.pass = bad == 0 && !rows.empty();
  sandwich.measured["members"] = static_cast<double>(rows.size());
  sandwich.measured["violations"] = static_cast<double>(bad);
  sandwich.witness = bad ? witness(csv, first_bad) : "distortion_members.csv";
  res.invariants.push_back(sandwich);

  Invariant monotone;
  monotone.name = "rows_monotone_in_v";
  monotone.pass = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].r.n < rows[i - 1].r.n) monotone.pass = false;
  monotone.witness = "distortion_members.csv";
  res.invariants.push_back(monotone);

  ordered_json details;
  auto& jm = details["members"] = ordered_json::array();
  for (const auto& row : rows) {
    const auto& r = row.r;
    ordered_json e{{"graph_id", r.graph_id}, {"n", r.n}, {"m", r.m}, {"diameter", r.diameter}};
    if (row.spectral) {
      e["lambda2"] = r.lambda2;
      e["poincare_C"] = r.poincare_C;
      e["poincare_certificate_gap"] = r.poincare_certificate_gap;
      e["kappa"] = r.kappa;
      e["far_fraction"] = r.far_fraction;
      e["poincare_lower"] = r.lower;
    } else {
      e["notice"] = "spectrum skipped above spectrum_cap";
    }
    e["canonical_upper"] = r.upper;
    if (r.sdp) e["sdp_exact"] = *r.sdp;
    jm.push_back(std::move(e));
  }

  // Constants c, d with c ln v ≤ lower and upper ≤ d ln v across members.
  std::vector<const Row*> fit_rows;
  for (const auto& row : rows)
    if (row.spectral && row.r.n > 1) fit_rows.push_back(&row);
  if (fit_rows.size() < 2) {
    details["fit"] = {{"notice", "fit skipped: fewer than two members"}};
  } else {
    double c = INFINITY, d = 0, sl = 0, su = 0, syy = 0;
    for (const auto* row : fit_rows) {
      const double y = std::log(static_cast<double>(row->r.n));
      c = std::min(c, row->r.lower / y);
      d = std::max(d, row->r.upper / y);
      sl += row->r.lower * y;
      su += row->r.upper * y;
      syy += y * y;
    }
    details["fit"] = {{"c_lower", c},
                      {"d_upper", d},
                      {"lower_slope_ls", sl / syy},
                      {"upper_slope_ls", su / syy},
                      {"members", fit_rows.size()}};
  }
  write_summary(dir / "distortion_summary.json", cfg, res, details);
  res.files.push_back(dir / "distortion_summary.json");
  return res;
}

// ---------------------------------------------------------------------------

CommandResult run_group_verify(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto dir = prepare(opt);
  CommandResult res;
  res.command = "group-verify";
  const auto rho = make_profile(cfg.profile);
  const auto groups = build_family(cfg.family);
  const GGroup G = GGroup::from_family(groups, rho);
  ordered_json details;
  details["profile"] = rho.describe();
  auto& jm = details["members"] = ordered_json::array();
  for (int k = 0; k < G.member_count(); ++k)
    jm.push_back({{"group", G.member(k)->label()},
                  {"v", G.member(k)->order()},
                  {"m", G.m_of(k)},
                  {"mu", G.mu_of(k)},
                  {"diameter", G.diameter_of(k)}});

  // Member lengths
  {
    const auto lengths = check_member_lengths(G, cfg.radius_cap, cfg.state_cap, cfg.tamper_mu);
    CsvWriter csv(dir / "group_member_lengths.csv",
                  {"member", "element", "mu", "length_k", "predicted", "exact", "ok"});
    std::size_t first_bad = SIZE_MAX;
    for (const auto& r : lengths.rows) {
      if (!r.ok() && first_bad == SIZE_MAX) first_bad = csv.rows();
      csv << r.k + 1 << static_cast<long long>(r.element) << r.mu << r.length_k << static_cast<long long>(r.predicted)
          << (r.exact ? std::to_string(*r.exact) : std::string()) << (r.ok() ? 1 : 0);
      csv.end_row();
    }
    res.files.push_back(csv.path());
    Invariant inv;
    inv.name = "member_length_exact";
    inv.pass = lengths.pass();
    inv.measured["checked"] = static_cast<double>(lengths.checked);
    inv.measured["skipped"] = static_cast<double>(lengths.skipped);
    inv.measured["violations"] = static_cast<double>(lengths.violations);
    inv.measured["fully_checked_members"] = static_cast<double>(lengths.fully_checked.size());
    inv.witness = first_bad != SIZE_MAX ? witness(csv, first_bad) : "group_member_lengths.csv";
    if (cfg.tamper_mu != 0) inv.note = "mu tampered by " + std::to_string(cfg.tamper_mu);
    res.invariants.push_back(inv);
    if (lengths.skipped > 0) res.partial = true;
  }

  const GBall ball(G, cfg.radius_cap, cfg.state_cap);
  res.partial = res.partial || ball.truncated() || cfg.radius_cap < 12;
  details["ball"] = {{"radius_cap", cfg.radius_cap},
                     {"state_cap", cfg.state_cap},
                     {"elements", ball.size()},
                     {"complete_radius", ball.complete_radius()},
                     {"truncated", ball.truncated()}};

  // Weight bracket
  {
    const auto wb = check_weight_bracket(G, ball);
    CsvWriter csv(dir / "group_weight_levels.csv", {"radius", "elements", "min_weight", "max_weight", "violations",
                                                     "worst_ratio", "witness"});
    std::size_t first_bad = SIZE_MAX;
    for (const auto& l : wb.levels) {
      if (l.violations && first_bad == SIZE_MAX) first_bad = csv.rows();
      csv << l.radius << l.elements << static_cast<long long>(l.elements ? l.min_weight : 0)
          << static_cast<long long>(l.max_weight) << l.violations << l.worst_ratio
          << (l.elements ? G.format(ball.element(l.witness)) : std::string());
      csv.end_row();
    }
    res.files.push_back(csv.path());
    Invariant inv;
    inv.name = "word_length_bracket";
    inv.pass = wb.pass();
    inv.measured["elements"] = static_cast<double>(wb.elements);
    inv.measured["violations"] = static_cast<double>(wb.violations);
    inv.measured["max_weight_over_length"] = wb.max_ratio;
    inv.measured["min_weight_over_length"] = wb.min_ratio;
    inv.witness = first_bad != SIZE_MAX ? witness(csv, first_bad) : "group_weight_levels.csv";
    res.invariants.push_back(inv);
  }

  // Distance bracket
  const auto pairs = sample_group_pairs(G, ball, cfg.samples.group_pairs, cfg.seed);
  {
    const auto db = check_distance_bracket(G, pairs);
    CsvWriter csv(dir / "group_distance_pairs.csv",
                  {"pair", "g_literal", "h_literal", "d_exact", "A", "bracket_lo", "bracket_hi", "case", "ok"});
    std::size_t first_bad = SIZE_MAX;
    for (const auto& r : db.rows) {
      if (!r.ok() && first_bad == SIZE_MAX) first_bad = csv.rows();
      const char* tag = r.bracket.tag == DistanceCase::kS ? "S" : r.bracket.tag == DistanceCase::kB ? "B" : "equal";
      csv << r.pair << G.format(pairs[r.pair].g) << G.format(pairs[r.pair].h) << r.d
          << static_cast<long long>(r.bracket.A) << r.bracket.lo << r.bracket.hi << std::string(tag) << (r.ok() ? 1 : 0);
      csv.end_row();
    }
    res.files.push_back(csv.path());
    Invariant inv;
    inv.name = "distance_bracket";
    inv.pass = db.pass();
    inv.measured["pairs"] = static_cast<double>(db.rows.size());
    inv.measured["violations"] = static_cast<double>(db.violations);
    inv.measured["worst_A_over_d"] = db.worst_ratio;
    inv.measured["least_A_over_d"] = db.least_ratio;
    inv.witness = witness(csv, first_bad != SIZE_MAX ? first_bad : db.worst_pair);
    res.invariants.push_back(inv);
  }

  // Embeddings
  {
    const auto er = check_embeddings(G, rho, pairs);
    CsvWriter csv(dir / "embed_pairs.csv", {"pair", "g_literal", "h_literal", "d_exact_or_bracket_lo", "bracket_hi",
                                            "psi_dist", "pi_dist", "rho_d", "ratio_psi", "ratio_pi"});
    std::size_t lip_row = 0, low_row = 0, psi_row = 0;
    for (const auto& r : er.rows) {
      if (r.pair == er.pi_lipschitz_pair) lip_row = csv.rows();
      if (r.pair == er.pi_lower_pair) low_row = csv.rows();
      if (r.pair == er.psi_lower_pair) psi_row = csv.rows();
      csv << r.pair << G.format(pairs[r.pair].g) << G.format(pairs[r.pair].h) << r.d_lo << r.d_hi << r.psi << r.pi
          << r.rho_lo << r.ratio_psi << r.ratio_pi;
      csv.end_row();
    }
    res.files.push_back(csv.path());
    Invariant lip;
    lip.name = "pi_lipschitz";
    lip.pass = !er.rows.empty() && std::isfinite(er.pi_lipschitz);
    lip.measured["sup_pi_over_d"] = er.pi_lipschitz;
    lip.witness = witness(csv, lip_row);
    res.invariants.push_back(lip);
    Invariant low;
    low.name = "pi_lower_bound";
    low.pass = !er.rows.empty() && er.pi_lower > 0 && std::isfinite(er.pi_lower);
    low.measured["inf_pi_log2_over_rho"] = er.pi_lower;
    low.witness = witness(csv, low_row);
    res.invariants.push_back(low);
    Invariant ps;
    ps.name = "psi_lower_bound";
    ps.pass = !er.rows.empty() && er.psi_lower > 0;
    ps.measured["c_prime"] = er.psi_lower;
    ps.witness = witness(csv, psi_row);
    res.invariants.push_back(ps);
    Invariant cf;
    cf.name = "psi_closed_form";
    cf.pass = er.closed_form_max_rel_error <= 1e-9;
    cf.measured["max_rel_error"] = er.closed_form_max_rel_error;
    cf.witness = "embed_pairs.csv";
    res.invariants.push_back(cf);
  }

  // Generator steps
  {
    const auto gs = check_generator_steps(G, ball, cfg.samples.generator_steps, cfg.seed);
    CsvWriter csv(dir / "embed_generator_steps.csv", {"elements", "psi_max", "pi_max"});
    csv << gs.elements << gs.psi_max << gs.pi_max;
    csv.end_row();
    res.files.push_back(csv.path());
    Invariant inv;
    inv.name = "generator_step_bounded";
    inv.pass = gs.pass();
    inv.measured["psi_max"] = gs.psi_max;
    inv.measured["pi_max"] = gs.pi_max;
    inv.witness = witness(csv, 0);
    res.invariants.push_back(inv);
  }

  // Auxiliary inequalities
  {
    const auto seqs = random_positive_sequences(cfg.samples.aux_sequences, cfg.samples.aux_max_length, cfg.seed);
    const auto aux = verify_aux_inequalities(seqs, cfg.aux_ceiling);
    CsvWriter csv(dir / "aux_inequalities.csv",
                  {"sequences", "suffix_violations", "log_sum_violations", "max_suffix_ratio", "max_log_sum", "ceiling",
                   "kappa_monotone"});
    const bool mono = kappa_profile_monotone();
    csv << aux.sequences << aux.new_violations << aux.lemineq_violations << aux.max_new_ratio << aux.max_lemineq
        << aux.ceiling << (mono ? 1 : 0);
    csv.end_row();
    res.files.push_back(csv.path());
    Invariant inv;
    inv.name = "aux_inequalities";
    inv.pass = aux.pass() && mono;
    inv.measured["sequences"] = static_cast<double>(aux.sequences);
    inv.measured["violations"] = static_cast<double>(aux.new_violations + aux.lemineq_violations);
    inv.measured["max_suffix_ratio"] = aux.max_new_ratio;
    inv.measured["max_log_sum"] = aux.max_lemineq;
    inv.witness = witness(csv, 0);
    res.invariants.push_back(inv);
  }

  if (res.partial)
    details["notice"] = "partial: ball complete to radius " + std::to_string(ball.complete_radius()) +
                        ", exactness checks limited to the stored ball";
  write_summary(dir / "group_summary.json", cfg, res, details);
  res.files.push_back(dir / "group_summary.json");
  return res;
}

}  // namespace cgap::app
