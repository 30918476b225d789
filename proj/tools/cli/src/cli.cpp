// Copyright 2026 The staleness-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "staleness/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <list>
#include <memory>
#include <sstream>

#include "options.hpp"
#include "staleness/charpoly.hpp"
#include "staleness/dynamics.hpp"
#include "staleness/errors.hpp"
#include "staleness/format.hpp"
#include "staleness/plot.hpp"
#include "staleness/pssim.hpp"
#include "staleness/roots.hpp"
#include "staleness/stability.hpp"
#include "staleness/verify.hpp"

#ifndef STALENESS_LAB_VERSION
#define STALENESS_LAB_VERSION "0.0.0"
#endif

namespace staleness::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Context {
  std::ostream& out;
  std::ostream& err;
  Clock::time_point start = Clock::now();
  std::vector<std::string> outputs = {};
};

void write_file(Context& ctx, const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  f.close();
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  ctx.outputs.push_back(path.generic_string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

/// Written last; lists every other file the run produced.
void write_manifest(Context& ctx, const fs::path& path, const std::string& command,
                    const Resolved& r, bool uses_seed) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["version"] = STALENESS_LAB_VERSION;
  m["config"] = r.to_json();
  nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
  if (uses_seed) seeds["seed"] = r.integer("seed");
  m["seeds"] = seeds;
  m["outputs"] = ctx.outputs;
  m["wall_time_seconds"] =
      std::chrono::duration<double>(Clock::now() - ctx.start).count();
  const auto outputs = ctx.outputs;
  write_file(ctx, path, m.dump(2) + "\n");
  ctx.outputs = outputs;
}

fs::path sibling_manifest(const fs::path& file) {
  return fs::path(file.string() + ".manifest.json");
}

// ---------------------------------------------------------------------------
// Argument helpers

int to_int(long v, const std::string& what) {
  if (v < 0 || v > 1'000'000) throw UsageError(what + " out of range: " + std::to_string(v));
  return static_cast<int>(v);
}

/// "lo..hi" (inclusive) or a comma-separated list.
std::vector<int> parse_int_set(const std::string& text, const std::string& what) {
  std::vector<int> out;
  try {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
      const long lo = parse_long(text.substr(0, dots));
      const long hi = parse_long(text.substr(dots + 2));
      if (hi < lo) throw UsageError(what + ": empty range '" + text + "'");
      for (long v = lo; v <= hi; ++v) out.push_back(to_int(v, what));
    } else {
      for (const auto& field : split(text, ',')) out.push_back(to_int(parse_long(field), what));
    }
  } catch (const DomainError&) {
    throw UsageError(what + ": expected 'lo..hi' or a comma list of integers, got '" + text + "'");
  }
  return out;
}

/// "uniform:lo,hi" or "gauss:mu"; the last number may be a range lo..hi,
/// which expands to one pmf per value.
std::vector<DelayModel> parse_pmfs(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("--pmf: expected 'uniform:lo,hi' or 'gauss:mu', got '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const auto args = split(text.substr(colon + 1), ',');
  std::vector<DelayModel> out;
  if (kind == "uniform" && args.size() == 2) {
    const int lo = to_int(parse_long(args[0]), "--pmf");
    for (int hi : parse_int_set(args[1], "--pmf")) out.push_back(pmf_uniform(lo, hi));
  } else if (kind == "gauss" && args.size() == 1) {
    for (int mu : parse_int_set(args[0], "--pmf")) out.push_back(pmf_discrete_gaussian(mu));
  } else {
    throw UsageError("--pmf: expected 'uniform:lo,hi' or 'gauss:mu', got '" + text + "'");
  }
  return out;
}

OptimizerFamily family_of(const Resolved& r, double m) {
  OptimizerFamily f{parse_variant(r.text("variant")), m};
  if (f.variant == Variant::kPlain && m != 0.0) {
    throw UsageError("--m applies to the momentum and shifted variants only");
  }
  f.validate();
  return f;
}

/// Single delay model from --tau (default 0) or --pmf.
DelayModel single_delay(const Resolved& r) {
  if (r.has("tau") && r.has("pmf")) throw UsageError("--tau and --pmf are mutually exclusive");
  if (r.has("pmf")) {
    auto models = parse_pmfs(r.text("pmf"));
    if (models.size() != 1) throw UsageError("--pmf: a single distribution is expected here");
    return models.front();
  }
  return DelayModel::constant(r.has("tau") ? to_int(r.integer("tau"), "--tau") : 0);
}

void require(const Resolved& r, const std::string& name) {
  if (!r.has(name)) throw UsageError("missing required option --" + name);
}

std::uint64_t seed_of(const Resolved& r) {
  const long s = r.integer("seed");
  if (s < 0) throw UsageError("--seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

/// Scalar problem of sharpness a, optionally split into two per-sample
/// curvatures a(1 - noise) and a(1 + noise).
QuadraticProblem scalar_problem(double a, std::optional<double> noise) {
  if (!(a > 0.0)) throw UsageError("--a must be positive");
  if (!noise) return QuadraticProblem::scalar(a);
  if (!(*noise >= 0.0 && *noise <= 1.0)) throw UsageError("--noise must lie in [0, 1]");
  Eigen::MatrixXd lo(1, 1), hi(1, 1);
  lo(0, 0) = a * (1.0 - *noise);
  hi(0, 0) = a * (1.0 + *noise);
  return QuadraticProblem::from_components({lo, hi});
}

std::ostream& summary_stream(Context& ctx, bool data_on_stdout) {
  return data_on_stdout ? ctx.err : ctx.out;
}

const OptionSpec kVariant{"variant", Kind::kText, "plain, momentum or shifted", {"plain"}};
const OptionSpec kBlowup{"blowup", Kind::kNumber, "divergence factor on the distance to x*", {"1e6"}};
const OptionSpec kDecay{"decay", Kind::kNumber, "convergence factor on the distance to x*", {"1e-6"}};
const OptionSpec kSeed{"seed", Kind::kInteger, "random seed; STALENESS_LAB_SEED replaces the default", {"0"}};

// ---------------------------------------------------------------------------
// Commands

std::vector<OptionSpec> threshold_specs() {
  return {kVariant,
          {"m", Kind::kNumberList, "momentum value(s); several give one series each", {"0"}},
          {"a", Kind::kNumber, "sharpness (required)"},
          {"tau", Kind::kText, "delays: lo..hi or a comma list"},
          {"pmf", Kind::kTextList, "delay pmf uniform:lo,hi or gauss:mu; last number may be lo..hi"},
          {"tol", Kind::kNumber, "relative bisection tolerance", {"1e-8"}},
          {"out", Kind::kText, "CSV output path (stdout when absent)"},
          {"plot", Kind::kText, "also write an SVG chart here"}};
}

int cmd_threshold(Context& ctx, const Resolved& r) {
  require(r, "a");
  const double a = r.number("a");
  if (!(a > 0.0)) throw UsageError("--a must be positive");
  if (r.has("tau") == r.has("pmf")) throw UsageError("give exactly one of --tau and --pmf");
  std::vector<DelayModel> delays;
  if (r.has("tau")) {
    delays = constant_delays(parse_int_set(r.text("tau"), "--tau"));
  } else {
    for (const auto& spec : r.texts("pmf")) {
      for (auto& d : parse_pmfs(spec)) delays.push_back(std::move(d));
    }
  }
  const auto ms = r.numbers("m");
  std::vector<OptimizerFamily> families;
  for (double m : ms) {
    families.push_back(family_of(r, m));
    if (r.has("pmf") && families.back().variant != Variant::kPlain) {
      throw UsageError("--pmf is only defined for the plain variant");
    }
  }
  const double tol = r.number("tol");
  if (!(tol >= 1e-15 && tol < 1.0)) throw UsageError("--tol must lie in [1e-15, 1)");

  std::vector<ThresholdCurve> curves;
  for (const auto& f : families) curves.push_back(threshold_curve(f, a, delays, tol));

  const bool to_stdout = !r.has("out");
  auto& info = summary_stream(ctx, to_stdout);
  bool failed = false;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (const auto& row : curves[i].rows) {
      if (row.result) continue;
      failed = true;
      ctx.err << "row " << format_double(row.expected_delay) << " (" << families[i].describe()
              << "): " << row.error << '\n';
    }
    const auto& fit = curves[i].fit;
    if (fit.points > 0) {
      info << families[i].describe() << ": slope=" << format_double(fit.slope)
           << " intercept=" << format_double(fit.intercept)
           << " r_squared=" << format_double(fit.r_squared) << " rows=" << fit.points << '\n';
    }
  }

  std::string table;
  std::vector<std::string> plot_columns;
  if (curves.size() == 1) {
    table = curves.front().to_csv();
    plot_columns = {"eta_star"};
  } else {
    std::ostringstream wide;
    wide << "tau_or_Etau";
    for (double m : ms) wide << ",m=" << format_double(m);
    wide << '\n';
    for (std::size_t row = 0; row < delays.size(); ++row) {
      wide << format_double(curves.front().rows[row].expected_delay);
      for (const auto& c : curves) {
        wide << ',';
        if (c.rows[row].result) wide << format_double(c.rows[row].result->eta_star);
      }
      wide << '\n';
    }
    table = wide.str();
  }

  if (to_stdout) {
    ctx.out << table;
  } else {
    const fs::path out = r.text("out");
    write_file(ctx, out, table);
    if (curves.size() > 1) {
      for (std::size_t i = 0; i < curves.size(); ++i) {
        fs::path per = out;
        per.replace_filename(out.stem().string() + ".m" + format_double(ms[i]) +
                             out.extension().string());
        write_file(ctx, per, curves[i].to_csv());
      }
    }
  }
  if (r.has("plot")) {
    auto fig = plot::figure_from_csv(plot::parse_csv(table), "tau_or_Etau", plot_columns);
    fig.title = "Threshold learning rate, " + std::string(to_string(families.front().variant)) +
                ", a=" + format_double(a);
    if (curves.size() > 1) fig.y_label = "eta_star";
    write_file(ctx, r.text("plot"), plot::render_svg(fig));
  }
  if (!to_stdout) write_manifest(ctx, sibling_manifest(r.text("out")), "threshold", r, false);
  return failed ? kExitFailure : kExitOk;
}

std::vector<OptionSpec> roots_specs() {
  return {kVariant,
          {"m", Kind::kNumber, "momentum", {"0"}},
          {"a", Kind::kNumber, "sharpness"},
          {"eta", Kind::kNumber, "learning rate"},
          {"tau", Kind::kInteger, "constant delay (default 0)"},
          {"pmf", Kind::kText, "delay pmf uniform:lo,hi or gauss:mu"},
          {"coeffs", Kind::kNumberList, "explicit ascending coefficients instead of a model"},
          {"out", Kind::kText, "CSV output path (stdout when absent)"}};
}

int cmd_roots(Context& ctx, const Resolved& r) {
  std::optional<Polynomial> p;
  if (r.has("coeffs")) {
    for (const char* other : {"a", "eta", "tau", "pmf"}) {
      if (r.given(other)) throw UsageError(std::string("--coeffs excludes --") + other);
    }
    p = Polynomial(r.numbers("coeffs"));
    if (p->degree() < 1) throw UsageError("--coeffs: need a polynomial of degree >= 1");
  } else {
    require(r, "a");
    require(r, "eta");
    const auto family = family_of(r, r.number("m"));
    p = char_poly(OptimizerSpec(family, r.number("eta")), r.number("a"), single_delay(r));
  }
  auto roots = all_roots(*p).roots;
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  std::ostringstream csv;
  csv << "re,im,magnitude\n";
  for (const auto& z : roots) {
    csv << format_double(z.real()) << ',' << format_double(z.imag()) << ','
        << format_double(std::abs(z)) << '\n';
  }
  const bool to_stdout = !r.has("out");
  const double top = roots.empty() ? 0.0 : std::abs(roots.front());
  summary_stream(ctx, to_stdout) << "max_magnitude=" << format_double(top) << ' '
                                 << (top < 1.0 ? "stable" : "unstable") << '\n';
  if (to_stdout) {
    ctx.out << csv.str();
  } else {
    write_file(ctx, r.text("out"), csv.str());
    write_manifest(ctx, sibling_manifest(r.text("out")), "roots", r, false);
  }
  return kExitOk;
}

std::vector<OptionSpec> simulate_specs() {
  return {kVariant,
          {"m", Kind::kNumber, "momentum", {"0"}},
          {"a", Kind::kNumber, "sharpness", {"1"}},
          {"eta", Kind::kNumber, "learning rate (required)"},
          {"tau", Kind::kInteger, "constant delay (default 0)"},
          {"pmf", Kind::kText, "delay pmf uniform:lo,hi or gauss:mu"},
          {"mode", Kind::kText, "expectation or sgd", {"expectation"}},
          {"noise", Kind::kNumber, "sgd: per-sample curvatures a(1 -/+ noise)", {"0.5"}},
          {"steps", Kind::kInteger, "step budget (default max(1e5, 100 (tau_max + 1)))"},
          kBlowup,
          kDecay,
          {"init", Kind::kText, "initial displacement: top or random", {"top"}},
          kSeed,
          {"record-every", Kind::kInteger, "keep every n-th norm in trace.csv", {"1"}},
          {"out", Kind::kText, "output directory (verdict JSON on stdout when absent)"}};
}

SimConfig sim_config(const Resolved& r, const OptimizerFamily& family) {
  SimConfig cfg;
  cfg.optimizer = OptimizerSpec(family, r.number("eta"));
  cfg.delay = single_delay(r);
  if (const auto steps = r.integer_if("steps")) cfg.max_steps = *steps;
  cfg.blowup_factor = r.number("blowup");
  cfg.decay_factor = r.number("decay");
  return cfg;
}

int cmd_simulate(Context& ctx, const Resolved& r) {
  require(r, "eta");
  const auto seed = seed_of(r);
  const auto family = family_of(r, r.number("m"));
  SimConfig cfg = sim_config(r, family);
  const auto init = r.text("init");
  if (init == "random") {
    cfg.init = InitSpec::random_unit(seed);
  } else if (init != "top") {
    throw UsageError("--init: expected top or random");
  }
  const long every = r.integer("record-every");
  if (every < 0 || every > 1'000'000'000) throw UsageError("--record-every out of range");
  cfg.record_every = static_cast<int>(every);
  cfg.validate();

  const auto mode = r.text("mode");
  SimVerdict v;
  if (mode == "expectation") {
    v = simulate_expectation(scalar_problem(r.number("a"), std::nullopt), cfg);
  } else if (mode == "sgd") {
    v = simulate_sgd(scalar_problem(r.number("a"), r.number("noise")), cfg, seed);
  } else {
    throw UsageError("--mode: expected expectation or sgd");
  }

  const std::string json = verdict_json(v, cfg) + "\n";
  if (!r.has("out")) {
    ctx.out << json;
  } else {
    const fs::path dir = r.text("out");
    write_file(ctx, dir / "trace.csv", trace_csv(v));
    write_file(ctx, dir / "verdict.json", json);
    write_manifest(ctx, dir / "manifest.json", "simulate", r, true);
    ctx.out << "status=" << to_string(v.status) << " steps=" << v.steps
            << " amplification=" << format_double(v.amplification) << '\n';
  }
  if (v.clipped_delays > 0) ctx.err << "clipped delays: " << v.clipped_delays << '\n';
  return kExitOk;
}

std::vector<OptionSpec> escape_specs() {
  return {kVariant,
          {"m", Kind::kNumber, "momentum", {"0"}},
          {"a", Kind::kNumber, "sharpness", {"1"}},
          {"eta", Kind::kNumberList, "ascending learning rates (required)"},
          {"tau", Kind::kInteger, "constant delay (default 0)"},
          {"pmf", Kind::kText, "delay pmf uniform:lo,hi or gauss:mu"},
          {"steps", Kind::kInteger, "step budget per run"},
          kBlowup,
          kDecay,
          {"out", Kind::kText, "CSV output path (stdout when absent)"}};
}

int cmd_escape(Context& ctx, const Resolved& r) {
  require(r, "eta");
  const auto family = family_of(r, r.number("m"));
  const auto etas = r.numbers("eta");
  if (!std::is_sorted(etas.begin(), etas.end())) throw UsageError("--eta values must be ascending");
  SimConfig base;
  base.delay = single_delay(r);
  if (const auto steps = r.integer_if("steps")) base.max_steps = *steps;
  base.blowup_factor = r.number("blowup");
  base.decay_factor = r.number("decay");
  base.validate();
  const auto rows = escape_time_curve(scalar_problem(r.number("a"), std::nullopt), family,
                                      base.delay, etas, base);
  const std::string csv = escape_curve_csv(rows);
  if (!r.has("out")) {
    ctx.out << csv;
  } else {
    write_file(ctx, r.text("out"), csv);
    write_manifest(ctx, sibling_manifest(r.text("out")), "escape-curve", r, false);
  }
  return kExitOk;
}

std::vector<OptionSpec> ps_specs() {
  return {{"workers", Kind::kInteger, "round-robin workers (delay workers - 1)"},
          {"pmf", Kind::kText, "sampled delays: uniform:lo,hi or gauss:mu"},
          kVariant,
          {"m", Kind::kNumber, "momentum", {"0"}},
          {"a", Kind::kNumber, "sharpness", {"1"}},
          {"eta", Kind::kNumber, "learning rate (required)"},
          {"steps", Kind::kInteger, "global step budget", {"100000"}},
          kSeed,
          {"gradients", Kind::kText, "expectation or sampled", {"expectation"}},
          {"noise", Kind::kNumber, "sampled: per-sample curvatures a(1 -/+ noise)", {"0.5"}},
          kBlowup,
          kDecay,
          {"out", Kind::kText, "output directory (verdict JSON on stdout when absent)"}};
}

int cmd_ps(Context& ctx, const Resolved& r) {
  require(r, "eta");
  if (r.has("workers") == r.has("pmf")) throw UsageError("give exactly one of --workers and --pmf");
  const auto seed = seed_of(r);
  const auto family = family_of(r, r.number("m"));
  const OptimizerSpec opt(family, r.number("eta"));
  std::optional<Scheduler> sched;
  if (r.has("workers")) {
    sched = Scheduler::round_robin(to_int(r.integer("workers"), "--workers"));
  } else {
    auto models = parse_pmfs(r.text("pmf"));
    if (models.size() != 1) throw UsageError("--pmf: a single distribution is expected here");
    sched = Scheduler::sampled_delay(models.front(), seed);
  }
  PSOptions options;
  options.blowup_factor = r.number("blowup");
  options.decay_factor = r.number("decay");
  const auto grads = r.text("gradients");
  std::optional<double> noise;
  if (grads == "sampled") {
    options.gradients = GradientMode::kSampled;
    noise = r.number("noise");
  } else if (grads != "expectation") {
    throw UsageError("--gradients: expected expectation or sampled");
  }
  const long steps = r.integer("steps");
  // The delay stream is seeded with `seed`; gradient sampling gets its own stream.
  const std::uint64_t run_seed = seed ^ 0x9e3779b97f4a7c15ULL;
  const auto run = run_ps(scalar_problem(r.number("a"), noise), *sched, opt, steps, run_seed, options);

  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(run.verdict.status));
  j["escape_step"] = run.verdict.escape_step ? nlohmann::ordered_json(*run.verdict.escape_step)
                                             : nlohmann::ordered_json(nullptr);
  j["amplification"] = run.verdict.amplification;
  j["steps"] = run.global_steps;
  j["clipped_delays"] = run.verdict.clipped_delays;
  nlohmann::ordered_json cfg;
  cfg["scheduler"] = sched->describe();
  cfg["variant"] = std::string(to_string(family.variant));
  cfg["eta"] = opt.eta();
  cfg["m"] = family.momentum;
  cfg["a"] = r.number("a");
  cfg["gradients"] = grads;
  cfg["max_steps"] = steps;
  cfg["seed"] = seed;
  cfg["blowup_factor"] = options.blowup_factor;
  cfg["decay_factor"] = options.decay_factor;
  j["config"] = cfg;
  const std::string json = j.dump(2) + "\n";

  if (!r.has("out")) {
    ctx.out << json;
  } else {
    const fs::path dir = r.text("out");
    write_file(ctx, dir / "trajectory.csv", ps_trajectory_csv(run));
    write_file(ctx, dir / "delays.csv", delay_histogram_csv(delay_histogram(run)));
    write_file(ctx, dir / "verdict.json", json);
    write_manifest(ctx, dir / "manifest.json", "ps", r, true);
    ctx.out << "status=" << to_string(run.verdict.status) << " steps=" << run.global_steps
            << " amplification=" << format_double(run.verdict.amplification) << '\n';
  }
  if (run.verdict.clipped_delays > 0) {
    ctx.err << "clipped delays: " << run.verdict.clipped_delays << '\n';
  }
  return kExitOk;
}

std::vector<OptionSpec> plot_specs() {
  return {{"input", Kind::kText, "CSV file with a header row", {}, true},
          {"out", Kind::kText, "SVG output path (required)"},
          {"title", Kind::kText, "chart title"},
          {"x", Kind::kText, "x column (default: first column)"},
          {"y", Kind::kTextList, "y column(s) (default: every numeric column)"}};
}

int cmd_plot(Context& ctx, const Resolved& r) {
  require(r, "input");
  require(r, "out");
  const auto input = r.text("input");
  plot::Figure fig;
  try {
    std::vector<std::string> ys;
    if (r.has("y")) ys = r.texts("y");
    fig = plot::figure_from_csv(plot::parse_csv(read_file(input)), r.text_or("x", ""), ys);
  } catch (const plot::CsvError& e) {
    ctx.err << input << ':' << e.line() << ": " << e.what() << '\n';
    return kExitFailure;
  }
  fig.title = r.text_or("title", "");
  write_file(ctx, r.text("out"), plot::render_svg(fig));
  write_manifest(ctx, sibling_manifest(r.text("out")), "plot", r, false);
  return kExitOk;
}

std::vector<OptionSpec> verify_specs() {
  return {{"only", Kind::kTextList, "run only these criteria (repeatable)"},
          {"out", Kind::kText, "keep artifacts and results.txt in this directory"}};
}

int cmd_verify(Context& ctx, const Resolved& r) {
  verify::VerifyOptions options;
  if (r.has("only")) options.only = r.texts("only");
  if (r.has("out")) options.out_dir = fs::path(r.text("out"));
  verify::VerifyReport report;
  try {
    report = verify::run_verify(options, &ctx.err);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::size_t passed = 0;
  for (const auto& res : report.results) passed += res.passed ? 1 : 0;
  ctx.out << report.table() << passed << '/' << report.results.size()
          << " criteria passed\n";
  if (options.out_dir) {
    std::vector<std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(*options.out_dir)) {
      if (e.is_regular_file() && e.path().filename() != "manifest.json") {
        files.push_back(e.path().generic_string());
      }
    }
    std::sort(files.begin(), files.end());
    ctx.outputs = files;
    write_manifest(ctx, *options.out_dir / "manifest.json", "verify", r, false);
  }
  return report.all_passed() ? kExitOk : kExitFailure;
}

struct Command {
  const char* name;
  const char* help;
  std::vector<OptionSpec> (*specs)();
  int (*run)(Context&, const Resolved&);
  bool uses_seed;
};

const Command kCommands[] = {
    {"threshold", "threshold learning rate per delay (root-based bisection)", threshold_specs,
     cmd_threshold, false},
    {"roots", "characteristic roots as re,im,magnitude rows", roots_specs, cmd_roots, false},
    {"simulate", "iterate the delayed dynamics on a scalar quadratic", simulate_specs, cmd_simulate,
     true},
    {"escape-curve", "escape step versus learning rate", escape_specs, cmd_escape, false},
    {"ps", "emulated asynchronous parameter server run", ps_specs, cmd_ps, true},
    {"plot", "SVG line chart from a CSV file", plot_specs, cmd_plot, false},
    {"verify", "run the acceptance criteria", verify_specs, cmd_verify, false},
};

std::string replay_command(const std::string& path) {
  const auto text = read_file(path);
  const auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("command") || !j["command"].is_string()) {
    throw UsageError("'" + path + "' is not a run manifest");
  }
  return j["command"].get<std::string>();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Stability thresholds of delayed (asynchronous) gradient descent.", "staleness-lab");
  app.set_version_flag("--version", STALENESS_LAB_VERSION);
  app.require_subcommand(0, 1);
  std::string replay;
  app.add_option("--replay", replay, "re-run the command recorded in a run manifest");

  std::list<CommandOptions> options;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : kCommands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    options.emplace_back(*sub, c.specs());
    subs.emplace_back(sub, &c);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n";
    const CLI::App* shown = &app;
    for (const auto& [sub, c] : subs) {
      if (sub->parsed()) shown = sub;
    }
    err << shown->help();
    return kExitUsage;
  }

  CLI::App* active = nullptr;
  const Command* command = nullptr;
  CommandOptions* active_options = nullptr;
  auto opt_it = options.begin();
  for (const auto& [sub, c] : subs) {
    if (sub->parsed()) {
      active = sub;
      command = c;
      active_options = &*opt_it;
    }
    ++opt_it;
  }

  try {
    if (!replay.empty()) {
      if (active) throw UsageError("--replay takes no subcommand");
      return run({replay_command(replay), "--config", replay}, out, err);
    }
    if (!active) {
      err << app.help();
      return kExitUsage;
    }
    std::map<std::string, std::string> env;
    if (command->uses_seed) {
      if (const char* s = std::getenv(kSeedEnv); s != nullptr && *s != '\0') env["seed"] = s;
    }
    const Resolved resolved = active_options->resolve(env);
    Context ctx{out, err};
    return command->run(ctx, resolved);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << (active ? active->help() : app.help());
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n\n" << (active ? active->help() : app.help());
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace staleness::cli
