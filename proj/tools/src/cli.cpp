#include "reluland_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "reluland/enumerate.hpp"
#include "reluland/errors.hpp"
#include "reluland/io.hpp"
#include "reluland/landscape.hpp"
#include "reluland/minima.hpp"
#include "reluland/rng.hpp"
#include "reluland/train.hpp"

namespace reluland::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Input problems that map to the usage exit code.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct TargetFlags {
  std::string file;
  std::string alpha = "1/3";
  std::string beta = "2/3";
  std::string a = "0";
  std::string b = "1";
};

struct OutputFlags {
  std::string dir;
  bool force = false;
};

void add_target_flags(CLI::App& cmd, TargetFlags& f) {
  cmd.add_option("--target", f.file, "target spec file (JSON)");
  cmd.add_option("--alpha", f.alpha, "benchmark alpha (decimal or fraction)")->capture_default_str();
  cmd.add_option("--beta", f.beta, "benchmark beta")->capture_default_str();
  cmd.add_option("--a", f.a, "left domain end")->capture_default_str();
  cmd.add_option("--b", f.b, "right domain end")->capture_default_str();
}

void add_output_flags(CLI::App& cmd, OutputFlags& f) {
  cmd.add_option("--out", f.dir, "output directory (report goes to stdout when omitted)");
  cmd.add_flag("--force", f.force, "overwrite existing output files");
}

Target load_target(const TargetFlags& f) {
  if (!f.file.empty()) {
    std::ifstream in(f.file);
    if (!in) throw UsageError("cannot read target file '" + f.file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_target_json(buf.str());
  }
  return Target(BenchmarkTarget(parse_real(f.alpha), parse_real(f.beta), parse_real(f.a), parse_real(f.b)));
}

json target_json(const Target& t) { return json::parse(target_to_json(t)); }

std::vector<double> theta_of(const Params& p) { return {p.theta().begin(), p.theta().end()}; }

// Collects output files and writes them all at once, refusing to clobber
// existing files unless forced.
class Outputs {
 public:
  Outputs(const OutputFlags& flags, std::ostream& out) : flags_(flags), out_(out) {}

  bool to_directory() const { return !flags_.dir.empty(); }

  void report(const std::string& name, const json& j) {
    if (to_directory()) {
      add(name, j.dump(2) + "\n");
    } else {
      stdout_report_ = j.dump(2);
    }
  }

  void add(const std::string& name, std::string content) {
    if (to_directory()) files_.emplace_back(name, std::move(content));
  }

  void commit() {
    if (stdout_report_) out_ << *stdout_report_ << '\n';
    if (!to_directory()) return;
    const fs::path dir(flags_.dir);
    for (const auto& [name, content] : files_) {
      if (fs::exists(dir / name) && !flags_.force)
        throw UsageError("refusing to overwrite '" + (dir / name).string() + "' (use --force)");
    }
    fs::create_directories(dir);
    for (const auto& [name, content] : files_) {
      std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
      if (!f) throw UsageError("cannot write '" + (dir / name).string() + "'");
      f << content;
    }
  }

 private:
  const OutputFlags& flags_;
  std::ostream& out_;
  std::optional<std::string> stdout_report_;
  std::vector<std::pair<std::string, std::string>> files_;
};

json base_report(const char* command) { return {{"schema_version", kSchemaVersion}, {"command", command}}; }

// ---------------------------------------------------------------------------
// minima

struct MinimaFlags {
  TargetFlags target;
  OutputFlags output;
  int H = 4;
  int samples = 10;
  std::vector<std::string> xs;
  std::string y = "1";
  std::uint64_t seed = 0;
  bool gap = false;
  std::string p = "1/2";
  std::string eps = "1/20";
};

int cmd_minima(const MinimaFlags& f, Outputs& outputs) {
  const Target target = load_target(f.target);
  const BenchmarkTarget* bt = target.benchmark();
  if (bt == nullptr) throw UsageError("minima needs a benchmark target");
  if (f.H < 1) throw UsageError("--H must be at least 1");
  const double y = parse_real(f.y);

  std::vector<double> xs;
  for (const std::string& s : f.xs) xs.push_back(parse_real(s));
  if (xs.empty()) {
    if (f.samples < 1) throw UsageError("--samples must be at least 1");
    const double lo = bt->alpha() + 0.05 * (bt->beta() - bt->alpha());
    const double hi = bt->beta() - 0.05 * (bt->beta() - bt->alpha());
    for (int k = 0; k < f.samples; ++k) xs.push_back(f.samples == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (f.samples - 1));
  }
  for (double x : xs)
    if (!(x > bt->alpha() && x < bt->beta())) throw UsageError("sample position outside (alpha, beta)");

  const double common = minima_risk(*bt);
  const double sq_gk = bt->unit_sq_integral(0.0, 1.0, QuadratureOptions{1e-13});
  const double sq_ts = bt->unit_sq_integral(0.0, 1.0, QuadratureOptions{1e-13, 40, QuadratureBackend::TanhSinh});
  const bool sq_ok = std::abs(sq_gk - sq_ts) <= 1e-10;

  json samples = json::array();
  json risks = json::array();
  json grad_norms = json::array();
  bool grads_ok = true;
  bool risks_ok = true;
  bool hessians_ok = true;
  double worst_min_eig = std::numeric_limits<double>::infinity();
  double worst_entry = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const MinimaSample s = sample_M(*bt, f.H, xs[k], y, f.seed + k);
    const double r = risk(s.theta, target);
    const double g = grad(s.theta, target).max_norm();
    const HessianReport h = hessian_fd(s.theta, target);
    const HessianReport h4 = hessian_fd(s.theta, target, kDefaultHessianStep, HessianCoords::Restricted4);
    const HessianReport hc = closed_hessian_M(xs[k], s.theta.w(0), *bt);
    double entry = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        entry = std::max(entry, std::abs(h4.at(i, j) - hc.at(i, j)) / std::max(std::abs(hc.at(i, j)), 1e-300));
    grads_ok = grads_ok && g < 1e-10;
    risks_ok = risks_ok && std::abs(r - common) <= 1e-9 * std::abs(common);
    hessians_ok = hessians_ok && h.numerical_rank == 2 && h.min_eigenvalue() > -1e-8 && entry <= 1e-5;
    worst_min_eig = std::min(worst_min_eig, h.min_eigenvalue());
    worst_entry = std::max(worst_entry, entry);
    risks.push_back(r);
    grad_norms.push_back(g);
    samples.push_back({{"x", xs[k]},
                       {"y", y},
                       {"theta", theta_of(s.theta)},
                       {"risk", r},
                       {"grad_norm", g},
                       {"hessian_rank", h.numerical_rank},
                       {"hessian_min_eigenvalue", h.min_eigenvalue()},
                       {"hessian_max_abs_eigenvalue", h.max_abs_eigenvalue()},
                       {"restricted_hessian_max_rel_diff", entry}});
  }

  json rep = base_report("minima");
  rep["target"] = target_json(target);
  rep["H"] = f.H;
  rep["minima_risk"] = common;
  rep["sq_integral"] = {{"gauss_kronrod", sq_gk}, {"tanh_sinh", sq_ts}};
  rep["samples"] = samples;
  rep["risks"] = risks;
  rep["grad_norms"] = grad_norms;
  rep["hessian_summary"] = {{"rank_tol", kDefaultRankTol},
                            {"all_rank_2", hessians_ok},
                            {"min_eigenvalue", worst_min_eig},
                            {"max_restricted_rel_diff", worst_entry}};
  bool gap_ok = true;
  if (f.gap) {
    const double p = parse_real(f.p);
    const double eps = parse_real(f.eps);
    const GapCertificate c = certify_gap(*bt, std::max(f.H, 2), p, eps, f.seed);
    gap_ok = c.gap > 0.0;
    rep["gap"] = {{"p", p},
                  {"eps", eps},
                  {"theta", theta_of(c.theta)},
                  {"witness", theta_of(c.witness)},
                  {"risk_theta", c.risk_theta},
                  {"risk_witness", c.risk_witness},
                  {"gap", c.gap}};
  } else {
    rep["gap"] = nullptr;
  }
  const bool passed = grads_ok && risks_ok && hessians_ok && sq_ok && gap_ok;
  rep["checks"] = {{"zero_gradient", grads_ok},
                   {"constant_risk", risks_ok},
                   {"sq_integral_backends_agree", sq_ok},
                   {"hessian", hessians_ok},
                   {"gap_positive", gap_ok}};
  rep["passed"] = passed;
  outputs.report("minima_report.json", rep);
  return passed ? kExitOk : kExitCertificate;
}

// ---------------------------------------------------------------------------
// enumerate

struct EnumerateFlags {
  TargetFlags target;
  OutputFlags output;
  std::string dedup = "1e-8";
  std::string resolution = "1e-5";
  int csv_points = 201;
};

json brackets_json(const std::vector<Bracket>& bs) {
  json out = json::array();
  for (const Bracket& b : bs) out.push_back({b.lo, b.hi});
  return out;
}

int cmd_enumerate(const EnumerateFlags& f, Outputs& outputs) {
  if (f.target.file.empty()) throw UsageError("enumerate needs --target FILE");
  const Target target = load_target(f.target);
  if (f.csv_points < 2) throw UsageError("--csv-points must be at least 2");
  const CriticalCatalog cat = enumerate_all(target, parse_real(f.dedup));
  const OracleCheck oracle = cross_check_oracle(normalize_to_unit(*target.piecewise()), parse_real(f.resolution));

  bool residuals_ok = true;
  bool grads_ok = true;
  json entries = json::array();
  for (std::size_t i = 0; i < cat.entries.size(); ++i) {
    const CatalogEntry& e = cat.entries[i];
    json j = {{"kind", to_string(e.kind)},
              {"risk", e.risk},
              {"grad_norm", e.grad_norm},
              {"class", e.crit_class ? json(to_string(*e.crit_class)) : json(nullptr)},
              {"hessian_corank", e.hessian_corank},
              {"theta", theta_of(e.theta)},
              {"kinks", e.realization.kinks},
              {"slopes", e.realization.slopes},
              {"offset", e.realization.offset}};
    if (e.kink) {
      j["q"] = e.kink->q;
      j["kink"] = e.realization.kinks.empty() ? json(nullptr) : json(e.realization.kinks.front());
      j["c"] = e.kink->c;
      j["vw"] = e.kink->vw;
      j["max_residual"] = e.kink->max_residual();
      residuals_ok = residuals_ok && e.kink->max_residual() < 1e-9;
    } else if (e.kind == EntryKind::Constant) {
      j["c"] = e.realization.offset;
    } else {
      // intercept of the affine fit at x = 0
      j["c"] = e.realization.offset - e.realization.slopes.front() * e.realization.lo;
    }
    grads_ok = grads_ok && e.grad_norm < 1e-9;
    entries.push_back(j);
    outputs.add("entry_" + std::to_string(i) + "_" + std::string(to_string(e.kind)) + ".csv",
                 realization_csv(e.realization, f.csv_points));
  }

  const bool passed = residuals_ok && grads_ok && oracle.agrees;
  json rep = base_report("enumerate");
  rep["target"] = target_json(target);
  rep["entries"] = entries;
  rep["excluded"] = cat.excluded;
  rep["oracle"] = {{"resolution", parse_real(f.resolution)},
                   {"increasing", brackets_json(oracle.grid.increasing)},
                   {"decreasing", brackets_json(oracle.grid.decreasing)},
                   {"degenerate_everywhere", oracle.grid.degenerate_everywhere},
                   {"agrees", oracle.agrees}};
  rep["checks"] = {{"residuals", residuals_ok}, {"zero_gradient", grads_ok}, {"oracle", oracle.agrees}};
  rep["passed"] = passed;
  outputs.report("catalog.json", rep);
  return passed ? kExitOk : kExitCertificate;
}

// ---------------------------------------------------------------------------
// train

struct TrainFlags {
  TargetFlags target;
  OutputFlags output;
  int H = 4;
  std::string lr = "1/20";
  std::string grad_tol = "1e-4";
  std::string dedup = "1e-4";
  std::uint64_t seed = 42;
  int runs = 50;
  long long max_iters = 10'000'000;
  int threads = 0;
  int csv_points = 201;
  bool svg = false;
};

const char* const kPalette[] = {"#d62728", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
                                "#e377c2", "#17becf", "#bcbd22", "#1f77b4", "#7f7f7f"};

Polyline sample_curve(const std::function<double(double)>& f, double lo, double hi, int n, std::string label,
                      std::string color) {
  Polyline p{std::move(label), std::move(color), {}, {}};
  for (int i = 0; i < n; ++i) {
    const double x = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
    p.xs.push_back(x);
    p.ys.push_back(f(x));
  }
  return p;
}

int cmd_train(const TrainFlags& f, Outputs& outputs) {
  const Target target = load_target(f.target);
  TrainConfig cfg;
  cfg.H = f.H;
  cfg.lr = parse_real(f.lr);
  cfg.grad_tol = parse_real(f.grad_tol);
  cfg.dedup_l2 = parse_real(f.dedup);
  cfg.master_seed = f.seed;
  cfg.runs = f.runs;
  cfg.max_iters = f.max_iters;
  cfg.threads = f.threads;
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (f.svg && !outputs.to_directory()) throw UsageError("--svg needs --out DIR");
  if (f.csv_points < 2) throw UsageError("--csv-points must be at least 2");

  const EnsembleReport rep = ensemble(target, cfg);
  json runs = json::array();
  bool all_ok = true;
  for (const TrainRun& r : rep.runs) {
    all_ok = all_ok && r.converged && !r.diverged && (!r.converged || r.grad_norm < cfg.grad_tol);
    runs.push_back({{"seed", r.seed},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"diverged", r.diverged},
                    {"hit_nonsmooth", r.hit_nonsmooth},
                    {"grad_norm", r.grad_norm},
                    {"risk", r.risk},
                    {"theta", theta_of(r.theta)}});
  }
  json clusters = json::array();
  std::vector<Polyline> curves{sample_curve([&](double x) { return target(x); }, target.lo(), target.hi(), 400,
                                            "target", "black")};
  for (std::size_t i = 0; i < rep.clusters.size(); ++i) {
    const Cluster& c = rep.clusters[i];
    const TrainRun& r = rep.runs[c.representative];
    json members = json::array();
    for (std::size_t m : c.members) members.push_back(rep.runs[m].seed);
    clusters.push_back({{"risk", c.risk},
                        {"representative_seed", r.seed},
                        {"members", members},
                        {"kinks", r.realization.kinks},
                        {"slopes", r.realization.slopes},
                        {"offset", r.realization.offset}});
    outputs.add("cluster_" + std::to_string(i) + ".csv", realization_csv(r.realization, f.csv_points));
    curves.push_back(sample_curve([&](double x) { return r.realization(x); }, target.lo(), target.hi(), 400,
                                  "cluster " + std::to_string(i), kPalette[i % std::size(kPalette)]));
  }
  if (f.svg) outputs.add("ensemble.svg", render_svg(curves, "target and trained realizations"));

  json out = base_report("train");
  out["target"] = target_json(target);
  out["config"] = {{"H", cfg.H},
                   {"lr", cfg.lr},
                   {"grad_tol", cfg.grad_tol},
                   {"max_iters", cfg.max_iters},
                   {"weight_var", cfg.effective_weight_var()},
                   {"dedup_l2", cfg.dedup_l2},
                   {"master_seed", cfg.master_seed},
                   {"runs", cfg.runs},
                   {"prng", SplitMix64::kName}};
  out["runs"] = runs;
  out["clusters"] = clusters;
  out["converged_runs"] = rep.converged_runs;
  out["all_runs_co_clustered"] = rep.all_co_clustered;
  out["risk_spread"] = rep.risk_spread();
  out["passed"] = all_ok;
  outputs.report("ensemble.json", out);
  return all_ok ? kExitOk : kExitCertificate;
}

// ---------------------------------------------------------------------------
// gf

struct GfFlags {
  TargetFlags target;
  OutputFlags output;
  int H = 1;
  std::string theta_file;
  std::uint64_t seed = 0;
  std::string t_end = "200";
  std::string rtol = "1e-9";
};

int cmd_gf(const GfFlags& f, Outputs& outputs) {
  const Target target = load_target(f.target);
  Params p0(std::max(f.H, 1));
  if (!f.theta_file.empty()) {
    std::ifstream in(f.theta_file);
    if (!in) throw UsageError("cannot read parameter file '" + f.theta_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    p0 = parse_params_json(buf.str());
  } else {
    if (f.H < 1) throw UsageError("--H must be at least 1");
    p0 = xavier_init(f.H, f.seed, 2.0 / (1.0 + f.H));
  }
  const double t_end = parse_real(f.t_end);
  const double rtol = parse_real(f.rtol);
  if (!(t_end > 0.0) || !(rtol > 0.0)) throw UsageError("--t-end and --rtol must be positive");

  const GFRun run = gf_run(p0, target, t_end, rtol);
  double max_increase = 0.0;
  for (std::size_t i = 1; i < run.trajectory.size(); ++i)
    max_increase = std::max(max_increase, run.trajectory[i].risk - run.trajectory[i - 1].risk);
  json traj = json::array();
  for (const GFSample& s : run.trajectory) traj.push_back({s.time, s.risk});

  const bool monotone = max_increase <= 10.0 * rtol;
  const bool passed = monotone && !run.step_underflow;
  json out = base_report("gf");
  out["target"] = target_json(target);
  out["theta0"] = theta_of(p0);
  out["t_end_requested"] = t_end;
  out["t_end"] = run.t_end;
  out["rtol"] = rtol;
  out["accepted_steps"] = run.accepted;
  out["rejected_steps"] = run.rejected;
  out["min_step"] = run.min_step;
  out["max_step"] = run.max_step;
  out["step_underflow"] = run.step_underflow;
  out["theta"] = theta_of(run.theta);
  out["final_risk"] = run.final_risk;
  out["max_risk_increase"] = max_increase;
  out["trajectory"] = traj;
  out["passed"] = passed;
  outputs.report("gf.json", out);
  return passed ? kExitOk : kExitCertificate;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loss-landscape toolkit for one-hidden-layer ReLU networks on an interval"};
  app.require_subcommand(1);

  MinimaFlags mf;
  CLI::App* minima = app.add_subcommand("minima", "certify the single-kink local-minimum family");
  add_target_flags(*minima, mf.target);
  add_output_flags(*minima, mf.output);
  minima->add_option("--H", mf.H, "network width")->capture_default_str();
  minima->add_option("--samples", mf.samples, "number of evenly spaced samples")->capture_default_str();
  minima->add_option("--x", mf.xs, "explicit normalized kink positions (repeatable)");
  minima->add_option("--y", mf.y, "inner scale")->capture_default_str();
  minima->add_option("--seed", mf.seed, "seed for inactive neurons")->capture_default_str();
  minima->add_flag("--gap", mf.gap, "also certify the gap to a two-kink witness");
  minima->add_option("--p", mf.p, "witness center")->capture_default_str();
  minima->add_option("--eps", mf.eps, "witness half-width")->capture_default_str();

  EnumerateFlags ef;
  CLI::App* enumerate = app.add_subcommand("enumerate", "enumerate width-1 critical realizations");
  add_target_flags(*enumerate, ef.target);
  add_output_flags(*enumerate, ef.output);
  enumerate->add_option("--dedup", ef.dedup, "L2 dedup threshold")->capture_default_str();
  enumerate->add_option("--resolution", ef.resolution, "grid oracle spacing")->capture_default_str();
  enumerate->add_option("--csv-points", ef.csv_points, "samples per realization CSV")->capture_default_str();

  TrainFlags tf;
  CLI::App* train = app.add_subcommand("train", "gradient-descent ensemble from Xavier starts");
  add_target_flags(*train, tf.target);
  add_output_flags(*train, tf.output);
  train->add_option("--H", tf.H, "network width")->capture_default_str();
  train->add_option("--lr", tf.lr, "learning rate")->capture_default_str();
  train->add_option("--grad-tol", tf.grad_tol, "stop when the gradient max-norm is below this")->capture_default_str();
  train->add_option("--dedup", tf.dedup, "L2 cluster threshold")->capture_default_str();
  train->add_option("--seed", tf.seed, "master seed")->capture_default_str();
  train->add_option("--runs", tf.runs, "number of runs")->capture_default_str();
  train->add_option("--max-iters", tf.max_iters, "iteration cap per run")->capture_default_str();
  train->add_option("--threads", tf.threads, "worker threads (0: RELULAND_THREADS or all cores)")->capture_default_str();
  train->add_option("--csv-points", tf.csv_points, "samples per cluster CSV")->capture_default_str();
  train->add_flag("--svg", tf.svg, "write ensemble.svg");

  GfFlags gf;
  CLI::App* flow = app.add_subcommand("gf", "integrate the gradient flow");
  add_target_flags(*flow, gf.target);
  add_output_flags(*flow, gf.output);
  flow->add_option("--H", gf.H, "network width for Xavier starts")->capture_default_str();
  flow->add_option("--theta", gf.theta_file, "start parameters (JSON {H, theta})");
  flow->add_option("--seed", gf.seed, "Xavier seed when --theta is absent")->capture_default_str();
  flow->add_option("--t-end", gf.t_end, "flow horizon")->capture_default_str();
  flow->add_option("--rtol", gf.rtol, "step-doubling tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help is reported as CallForHelp too; anything else is a usage error.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    int code = kExitOk;
    const OutputFlags* flags = nullptr;
    if (minima->parsed()) flags = &mf.output;
    if (enumerate->parsed()) flags = &ef.output;
    if (train->parsed()) flags = &tf.output;
    if (flow->parsed()) flags = &gf.output;
    Outputs outputs(*flags, out);
    if (minima->parsed()) code = cmd_minima(mf, outputs);
    if (enumerate->parsed()) code = cmd_enumerate(ef, outputs);
    if (train->parsed()) code = cmd_train(tf, outputs);
    if (flow->parsed()) code = cmd_gf(gf, outputs);
    outputs.commit();
    if (code != kExitOk) err << "certificate check failed\n";
    return code;
  } catch (const FinitenessError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const WitnessError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCertificate;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace reluland::cli
