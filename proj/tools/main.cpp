// bllab: numerical laboratory for variance Brascamp-Lieb deficits,
// stability constants, super-Brascamp-Lieb profiles, additive-phi constant
// conversions, entropic inequalities, and the 1D Muckenhoupt criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bllab/battery.hpp"
#include "bllab/config.hpp"
#include "bllab/errors.hpp"
#include "bllab/functionals.hpp"
#include "bllab/muckenhoupt.hpp"
#include "bllab/report.hpp"
#include "bllab/spectral.hpp"
#include "bllab/stability.hpp"
#include "bllab/superbl.hpp"

namespace fs = std::filesystem;
using namespace bllab;

namespace {

struct Common {
  std::string config_path;
  std::string measure_spec;
  std::string out_dir = "out";
  int level = 0;  // 0: use config / default
  int mesh = 0;
  long seed = -1;
  bool json_stdout = false;
  bool no_timestamp = false;
};

struct Context {
  Config cfg;
  std::string hash;
  Common common;

  Measure measure() const { return measure_from_config(cfg, common.level); }
  BatterySpec battery_spec() const {
    BatterySpec spec = battery_from_config(cfg);
    if (common.seed >= 0) spec.seed = static_cast<std::uint64_t>(common.seed);
    return spec;
  }
  bool timestamp() const { return !common.no_timestamp; }

  fs::path out(const std::string& name) const {
    fs::create_directories(common.out_dir);
    return fs::path(common.out_dir) / name;
  }
  Json stamp() const {
    Json j;
    j["config_hash"] = hash;
    j["seed"] = battery_spec().seed;
    return j;
  }
  void emit(const std::string& name, const Json& j) const {
    write_json(out(name).string(), j);
    if (common.json_stdout) std::cout << j.dump(2) << std::endl;
  }
};

Context make_context(const Common& c) {
  Context ctx;
  ctx.common = c;
  if (!c.config_path.empty()) ctx.cfg = Config::parse_file(c.config_path);
  if (!c.measure_spec.empty()) {
    // Flag form "kind:key=val,..." overrides the [measure] section.
    Measure probe = measure_from_string(c.measure_spec);  // validates early
    (void)probe;
    std::string kind = c.measure_spec.substr(0, c.measure_spec.find(':'));
    ctx.cfg.set("measure.kind", kind);
    std::string args = c.measure_spec.find(':') == std::string::npos
                           ? ""
                           : c.measure_spec.substr(c.measure_spec.find(':') + 1);
    std::istringstream in(args);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) continue;
      auto eq = tok.find('=');
      if (eq == std::string::npos)
        ctx.cfg.set("measure." + tok, "true");
      else
        ctx.cfg.set("measure." + tok.substr(0, eq), tok.substr(eq + 1));
    }
  }
  if (c.level > 0) ctx.cfg.set("measure.level", std::to_string(c.level));
  if (c.seed >= 0) ctx.cfg.set("battery.seed", std::to_string(c.seed));
  if (c.mesh > 0) ctx.cfg.set("spectral.mesh", std::to_string(c.mesh));
  ctx.hash = config_hash(ctx.cfg.canonical());
  return ctx;
}

BetaCurve beta_from_config(const Config& cfg) {
  std::string name = cfg.get("beta.curve", "log");
  if (name == "log") return beta_log();
  if (name == "one") return beta_one();
  throw ConfigError("unknown beta curve: " + name);
}

PhiFunction phi_from_name(const std::string& name) {
  if (name == "log") return phi_log();
  if (name == "one_plus_log" || name == "1+log") return phi_one_plus_log();
  throw ConfigError("unknown phi: " + name);
}

// ---------------------------------------------------------------------------

int cmd_deficit(const Context& ctx) {
  Measure m = ctx.measure();
  auto battery = make_battery(m, ctx.battery_spec());

  CsvTable table;
  table.header = {"fn",      "variance", "energy",   "deficit",  "err_est",
                  "mean",    "barycentre", "best_theta", "l1_best", "l2_best",
                  "l1_bary", "l2_bary"};
  Json rows = Json::array();
  for (const auto& f : battery) {
    DeficitReport r = deficit(m, f);
    table.add_row({f.label, format_double(r.variance), format_double(r.energy),
                   format_double(r.deficit), format_double(r.err_est),
                   format_double(r.mean), format_double(r.barycentre),
                   format_double(r.best_theta), format_double(r.l1_best),
                   format_double(r.l2_best), format_double(r.l1_bary),
                   format_double(r.l2_bary)});
    Json jr = {{"fn", f.label},
               {"variance", r.variance},
               {"energy", r.energy},
               {"deficit", r.deficit},
               {"err_est", r.err_est},
               {"barycentre", r.barycentre},
               {"best_theta", r.best_theta},
               {"l1_best", r.l1_best},
               {"l2_best", r.l2_best},
               {"l1_bary", r.l1_bary},
               {"l2_bary", r.l2_bary}};
    rows.push_back(jr);
  }
  write_csv(ctx.out("deficit.csv").string(), table);
  Json j = ctx.stamp();
  j["measure"] = m.describe();
  j["reports"] = rows;
  ctx.emit("deficit.json", j);
  return 0;
}

int cmd_stability(const Context& ctx) {
  Measure m = ctx.measure();
  auto battery = make_battery(m, ctx.battery_spec());
  double delta = ctx.cfg.get_double("stability.delta", 0.5);
  double C0 = ctx.cfg.get_double("stability.c0", 1.0);
  std::string c1s = ctx.cfg.get("stability.c1", "fit");

  C1Fit fit;
  double C1 = 0.0;
  if (c1s == "fit") {
    fit = fit_c1(m, battery);
    C1 = fit.c1_hat;
  } else {
    C1 = std::stod(c1s);
  }
  StabilityInputs in = make_inputs(m, delta, C0, C1);
  StabilityConstants consts = stability_constants(in);

  CsvTable table;
  table.header = {"fn",         "eps",        "theta_hat",  "theta_star",
                  "lhs_l2_hat", "rhs_l2_hat", "lhs_l1_star", "rhs_l1_star",
                  "lhs_l2_star", "rhs_l2_star", "hyp_res_hat", "hyp_res_star"};
  Json rows = Json::array();
  int skipped = 0;
  for (const auto& f : battery) {
    try {
      StabilityReport r = verify_stability(m, f, in);
      table.add_row({f.label, format_double(r.eps), format_double(r.theta_hat),
                     format_double(r.theta_star), format_double(r.lhs_l2_hat),
                     format_double(r.rhs_l2_hat), format_double(r.lhs_l1_star),
                     format_double(r.rhs_l1_star), format_double(r.lhs_l2_star),
                     format_double(r.rhs_l2_star),
                     format_double(r.hyp_residual_hat),
                     format_double(r.hyp_residual_star)});
      rows.push_back({{"fn", f.label},
                      {"eps", r.eps},
                      {"theta_hat", r.theta_hat},
                      {"theta_star", r.theta_star},
                      {"margin_l2_hat", r.margin_l2_hat},
                      {"margin_l1_star", r.margin_l1_star},
                      {"margin_l2_star", r.margin_l2_star},
                      {"hyp_residual_hat", r.hyp_residual_hat},
                      {"hyp_residual_star", r.hyp_residual_star}});
    } catch (const ZeroDeficit&) {
      ++skipped;
    }
  }
  write_csv(ctx.out("stability.csv").string(), table);
  Json j = ctx.stamp();
  j["measure"] = m.describe();
  j["inputs"] = {{"delta", in.delta}, {"C0", in.C0},   {"C1", in.C1},
                 {"m2", in.m2},       {"m1V", in.m1V}, {"c1_mode", c1s}};
  j["constants"] = {{"C2", consts.C2}, {"C3", consts.C3}, {"C4", consts.C4}};
  j["skipped_zero_deficit"] = skipped;
  j["reports"] = rows;
  ctx.emit("stability.json", j);
  return 0;
}

int cmd_beta_profile(const Context& ctx) {
  Measure m = ctx.measure();
  auto battery = make_battery(m, ctx.battery_spec());
  std::vector<double> s_grid =
      ctx.cfg.get_list("beta.s_grid", {1, 2, 4, 10, 40, 100, 1000});
  ProfileConfig pc;
  pc.use_eigen = ctx.cfg.get_bool("beta.use_eigen", true);
  pc.eigen_mesh = ctx.cfg.get_int("beta.eigen_mesh", 257);
  auto pts = beta_profile(m, s_grid, battery, pc);

  CsvTable table;
  table.header = {"s", "beta_hat", "witness"};
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    table.add_row({format_double(p.s), format_double(p.beta_hat), p.witness});
    xs.push_back(p.s);
    ys.push_back(p.beta_hat);
  }
  write_csv(ctx.out("beta_profile.csv").string(), table);
  if (!pts.empty()) {
    SvgOptions opt;
    opt.title = "empirical beta(s) lower bound: " + m.describe();
    opt.x_label = "s";
    opt.y_label = "beta_hat";
    opt.log_x = true;
    opt.timestamp = ctx.timestamp();
    write_text(ctx.out("beta_profile.svg").string(), svg_line_plot(xs, ys, opt));
  }

  Json j = ctx.stamp();
  j["measure"] = m.describe();
  Json arr = Json::array();
  for (const auto& p : pts)
    arr.push_back({{"s", p.s}, {"beta_hat", p.beta_hat}, {"witness", p.witness}});
  j["profile"] = arr;
  ctx.emit("beta_profile.json", j);
  return 0;
}

int cmd_convert_phi(const Context& ctx, const std::string& phi_name,
                    double c_phi) {
  PhiFunction phi = phi_from_name(phi_name);
  PhiToBetaResult r = phi_to_beta(phi, c_phi);
  Json j = ctx.stamp();
  j["phi"] = phi.label;
  j["C_phi"] = c_phi;
  j["D"] = r.D;
  j["s0"] = r.s0;
  j["s0_alt"] = r.s0_alt;
  j["s0_note"] =
      "s0 uses 4*phi_plus_inv(2D); s0_alt uses 4*phi_plus_inv(D). Published "
      "statements of this conversion differ between the two normalisations; "
      "both are reported.";
  Json curve = Json::array();
  for (double s : logspace(r.s0, r.s0 * 1e4, 25))
    curve.push_back({{"s", s}, {"beta", r.beta(s)}});
  j["beta_curve"] = curve;
  ctx.emit("convert_phi.json", j);
  return 0;
}

int cmd_convert_beta(const Context& ctx, const std::string& phi_name,
                     const std::string& beta_name, double s0) {
  BetaCurve beta = beta_name == "log" ? beta_log() : beta_one();
  beta.s0 = s0;
  PhiFunction phi = phi_from_name(phi_name);
  auto t0 = std::chrono::steady_clock::now();
  double c_phi = beta_to_phi(beta, phi);
  auto t1 = std::chrono::steady_clock::now();
  Json j = ctx.stamp();
  j["beta"] = beta.label;
  j["s0"] = beta.s0;
  j["phi"] = phi.label;
  j["gamma"] = phi.gamma;
  j["M"] = phi.M;
  j["C_phi"] = c_phi;
  j["eval_seconds"] = std::chrono::duration<double>(t1 - t0).count();
  ctx.emit("convert_beta.json", j);
  return 0;
}

int cmd_muckenhoupt(const Context& ctx) {
  Measure m = ctx.measure();
  BetaCurve beta = beta_from_config(ctx.cfg);
  MuckenhouptReport rep = B(m, beta);

  CsvTable table;
  table.header = {"x", "value"};
  std::vector<double> xs, ys;
  for (const auto& p : rep.trace) {
    table.add_row({format_double(p.x), format_double(p.value)});
    xs.push_back(p.x);
    ys.push_back(p.value);
  }
  write_csv(ctx.out("muckenhoupt_scan.csv").string(), table);
  SvgOptions opt;
  opt.title = "Muckenhoupt scan: " + m.describe();
  opt.x_label = "x";
  opt.y_label = "mu/beta(1/mu) * capacity integral";
  opt.log_x = true;
  opt.timestamp = ctx.timestamp();
  write_text(ctx.out("muckenhoupt_scan.svg").string(),
             svg_line_plot(xs, ys, opt));

  Json j = ctx.stamp();
  j["measure"] = m.describe();
  j["beta"] = beta.label;
  j["finite"] = rep.finite;
  j["stabilized"] = rep.stabilized;
  if (rep.finite) {
    j["B"] = rep.B;
    j["x_star"] = rep.x_star;
    j["implied_super_bl_factor"] = 8.0;  // finite B yields the 8*beta(s) bound
  }
  ctx.emit("muckenhoupt.json", j);
  return 0;
}

int cmd_spectral(const Context& ctx) {
  Measure m = ctx.measure();
  int mesh = ctx.cfg.get_int("spectral.mesh", 2049);
  std::vector<int> meshes = {mesh / 4 + 1, mesh / 2 + 1, mesh};

  CsvTable table;
  table.header = {"mesh", "lambda"};
  Json arr = Json::array();
  double lam = 0.0;
  for (int n : meshes) {
    auto df = discretize_forms(m, n);
    lam = stability_eigenvalue(df);
    table.add_row({std::to_string(n), format_double(lam)});
    arr.push_back({{"mesh", n}, {"lambda", lam}});
  }
  write_csv(ctx.out("spectral_convergence.csv").string(), table);

  double s = ctx.cfg.get_double("spectral.s", 10.0);
  int iters = ctx.cfg.get_int("spectral.iters", 3);
  auto df = discretize_forms(m, std::min(mesh, 1025));
  // Seed the sign-pattern search with the strongest dyadic cutoffs.
  BatterySpec bs = ctx.battery_spec();
  bs.size = std::min(bs.size, 16);
  std::vector<std::pair<double, Eigen::VectorXd>> ranked;
  for (const auto& f : make_battery(m, bs)) {
    TestFunction u = normalized_l2(m, f);
    for (const auto& cut : dyadic_cutoffs(u, 0, 8)) {
      Eigen::VectorXd v = df.interpolate(cut);
      if (v.dot(df.E * v) > 1e-12) ranked.emplace_back(df.beta_ratio(v, s), std::move(v));
    }
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Eigen::VectorXd> seeds;
  for (std::size_t i = 0; i < ranked.size() && i < 5; ++i)
    seeds.push_back(std::move(ranked[i].second));
  BetaEigenResult adv = worst_beta_eigen(df, s, iters, seeds);
  CsvTable wit;
  wit.header = {"x", "witness"};
  std::vector<double> xs, ys;
  for (int i = 0; i < df.nx; ++i) {
    wit.add_row({format_double(df.mesh_x[i]), format_double(adv.witness[i])});
    xs.push_back(df.mesh_x[i]);
    ys.push_back(adv.witness[i]);
  }
  write_csv(ctx.out("spectral_witness.csv").string(), wit);
  SvgOptions opt;
  opt.title = "beta adversary witness (s = " + format_double(s) + ")";
  opt.x_label = "x";
  opt.y_label = "f";
  opt.timestamp = ctx.timestamp();
  write_text(ctx.out("spectral_witness.svg").string(), svg_line_plot(xs, ys, opt));

  Json j = ctx.stamp();
  j["measure"] = m.describe();
  j["convergence"] = arr;
  j["lambda"] = lam;
  j["sharp_C2_estimate"] = 1.0 / lam;
  j["adversary"] = {{"s", s}, {"beta_lower", adv.beta_lower}};
  ctx.emit("spectral.json", j);
  return 0;
}

int cmd_tensor_check(const Context& ctx, const std::string& spec_a,
                     const std::string& spec_b) {
  Measure a = measure_from_string(spec_a.empty() ? "gaussian:a=1" : spec_a);
  Measure b = measure_from_string(spec_b.empty() ? "gaussian:a=1" : spec_b);
  PhiFunction phi = phi_from_name(ctx.cfg.get("phi.kind", "log"));
  BatterySpec bs = ctx.battery_spec();
  auto fam2 = make_battery_2d(a, b, bs);
  auto bat_a = make_battery(a, bs);
  auto bat_b = make_battery(b, bs);
  int level = ctx.cfg.get_int("tensor.level", 6);
  TensorReport rep = tensor_check(a, b, phi, fam2, bat_a, bat_b, level);

  Json j = ctx.stamp();
  j["measure_a"] = a.describe();
  j["measure_b"] = b.describe();
  j["phi"] = phi.label;
  j["worst_2d"] = rep.worst_2d;
  j["worst_1d_a"] = rep.worst_1d_a;
  j["worst_1d_b"] = rep.worst_1d_b;
  j["max_1d"] = std::max(rep.worst_1d_a, rep.worst_1d_b);
  j["tensorises"] = rep.worst_2d <= std::max(rep.worst_1d_a, rep.worst_1d_b) + 1e-6;
  j["witness_2d"] = rep.witness_2d;
  ctx.emit("tensor_check.json", j);
  return 0;
}

int cmd_entropic_check(const Context& ctx) {
  Measure m = ctx.measure();
  auto battery = make_battery(m, ctx.battery_spec());
  double worst = entropic_check(m, battery);
  double bound = m.half_line() ? 2.0 : 3.0 + std::log(2.0);

  double worst_rothaus = 0.0;
  bool first = true;
  for (const auto& f : battery) {
    try {
      double r = rothaus_residual(m, f);
      if (first || r < worst_rothaus) worst_rothaus = r;
      first = false;
    } catch (const DegenerateFunction&) {
    }
  }

  Json j = ctx.stamp();
  j["measure"] = m.describe();
  j["worst_ratio"] = worst;
  j["stated_constant"] = bound;
  j["within_constant"] = worst <= bound + 1e-6;
  j["min_rothaus_residual"] = worst_rothaus;
  ctx.emit("entropic_check.json", j);
  return 0;
}

// Condensed invariant suite; exit code 4 on violation.
int cmd_selftest(const Context& ctx) {
  CsvTable table;
  table.header = {"check", "observed", "threshold", "pass"};
  bool all_ok = true;
  auto check = [&](const std::string& name, double observed, double threshold,
                   bool ok) {
    table.add_row({name, format_double(observed), format_double(threshold),
                   ok ? "1" : "0"});
    all_ok = all_ok && ok;
  };

  BatterySpec bs = ctx.battery_spec();
  bs.size = std::min(bs.size, 24);

  Measure g(Potential::gaussian(1.0));
  Measure p15(Potential::power(1.5, 0.1));
  for (const Measure* m : {&g, &p15}) {
    auto battery = make_battery(*m, bs);
    double worst_neg = 0.0, worst_shift = 0.0, worst_markov = 0.0;
    for (const auto& f : battery) {
      DeficitReport r = deficit(*m, f);
      worst_neg = std::min(worst_neg, r.deficit + 10.0 * r.err_est);
      worst_shift =
          std::max(worst_shift, extremiser_shift_residual(*m, f, 1.7));
      TestFunction fn = normalized_l2(*m, f);
      auto cuts = dyadic_cutoffs(fn, 0, 8);
      for (std::size_t k = 0; k < cuts.size(); ++k) {
        const auto& cut = cuts[k];
        double c1 = integrate(*m, [&](double x) { return cut.f(x); }).value;
        double c2 =
            integrate(*m, [&](double x) { double v = cut.f(x); return v * v; }).value;
        double bound = std::exp2(1.0 - static_cast<double>(k));  // n = k here
        worst_markov = std::max(worst_markov, c1 * c1 - bound * c2);
      }
    }
    std::string tag = m->describe();
    check("deficit_nonneg[" + tag + "]", worst_neg, 0.0, worst_neg >= 0.0);
    check("shift_identity[" + tag + "]", worst_shift, 1e-8, worst_shift <= 1e-8);
    check("markov_cutoff[" + tag + "]", worst_markov, 0.0, worst_markov <= 1e-12);
  }

  MuckenhouptReport bl = B_log(g);
  MuckenhouptReport bb = B(g, beta_log());
  check("blog_identity", std::abs(bl.B - bb.B), 1e-10,
        std::abs(bl.B - bb.B) <= 1e-10);
  check("blog_stabilized", bl.stabilized ? 1.0 : 0.0, 1.0, bl.stabilized);

  double cphi = beta_to_phi(beta_log(), phi_one_plus_log());
  check("convert_beta_value", cphi, 173.5, cphi > 172.5 && cphi < 173.5);

  PhiToBetaResult conv = phi_to_beta(phi_log(), 1.0);
  check("convert_phi_D", std::abs(conv.D - std::exp(-1.0)), 1e-10,
        std::abs(conv.D - std::exp(-1.0)) <= 1e-10);

  write_csv(ctx.out("selftest.csv").string(), table);
  Json j = ctx.stamp();
  j["checks"] = table.rows.size();
  j["all_ok"] = all_ok;
  Json rows = Json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"check", r[0]}, {"observed", r[1]}, {"threshold", r[2]},
                    {"pass", r[3]}});
  j["rows"] = rows;
  ctx.emit("selftest.json", j);
  if (!all_ok) throw InvariantViolation("selftest found a violated invariant");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bllab: functional-inequality laboratory for 1D log-concave measures"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  Common c;
  app.add_option("--config", c.config_path, "INI config file");
  app.add_option("--measure", c.measure_spec,
                 "measure spec, e.g. power:p=1.5,r=0.1 or power:p=2,half_line");
  app.add_option("--out", c.out_dir, "output directory");
  app.add_option("--level", c.level, "quadrature level (1..16)");
  app.add_option("--mesh", c.mesh, "spectral mesh nodes");
  app.add_option("--seed", c.seed, "battery seed");
  app.add_flag("--json", c.json_stdout, "also print JSON to stdout");
  app.add_flag("--no-timestamp", c.no_timestamp, "suppress SVG timestamps");

  auto* sub_deficit = app.add_subcommand("deficit", "battery deficit reports");
  auto* sub_stab = app.add_subcommand("stability", "stability constant chain");
  auto* sub_beta = app.add_subcommand("beta-profile", "empirical beta(s)");
  std::string phi_name = "log", beta_name = "log";
  double c_phi = 1.0, s0 = 1.0;
  auto* sub_cphi = app.add_subcommand("convert-phi", "phi-BL constant -> beta curve");
  sub_cphi->add_option("--phi", phi_name, "phi kind (log, one_plus_log)");
  sub_cphi->add_option("--c-phi", c_phi, "additive-phi constant");
  auto* sub_cbeta = app.add_subcommand("convert-beta", "beta curve -> phi-BL constant");
  std::string cb_phi = "one_plus_log";
  sub_cbeta->add_option("--phi", cb_phi, "extending phi");
  sub_cbeta->add_option("--beta", beta_name, "beta curve (log, one)");
  sub_cbeta->add_option("--s0", s0, "curve threshold s0");
  auto* sub_muck = app.add_subcommand("muckenhoupt", "B criterion sup-scan");
  auto* sub_spec = app.add_subcommand("spectral", "discrete pencil eigenvalues");
  std::string spec_a, spec_b;
  auto* sub_tensor = app.add_subcommand("tensor-check", "2D additive-phi check");
  sub_tensor->add_option("--measure-a", spec_a, "first factor");
  sub_tensor->add_option("--measure-b", spec_b, "second factor");
  auto* sub_entropic = app.add_subcommand("entropic-check", "entropy/energy ratios");
  auto* sub_self = app.add_subcommand("selftest", "condensed invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Context ctx = make_context(c);
    if (sub_deficit->parsed()) return cmd_deficit(ctx);
    if (sub_stab->parsed()) return cmd_stability(ctx);
    if (sub_beta->parsed()) return cmd_beta_profile(ctx);
    if (sub_cphi->parsed()) return cmd_convert_phi(ctx, phi_name, c_phi);
    if (sub_cbeta->parsed()) return cmd_convert_beta(ctx, cb_phi, beta_name, s0);
    if (sub_muck->parsed()) return cmd_muckenhoupt(ctx);
    if (sub_spec->parsed()) return cmd_spectral(ctx);
    if (sub_tensor->parsed()) return cmd_tensor_check(ctx, spec_a, spec_b);
    if (sub_entropic->parsed()) return cmd_entropic_check(ctx);
    if (sub_self->parsed()) return cmd_selftest(ctx);
    std::cerr << "no subcommand" << std::endl;
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << std::endl;
    return 4;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
}
