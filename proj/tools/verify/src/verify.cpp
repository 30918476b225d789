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

#include "staleness/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "staleness/charpoly.hpp"
#include "staleness/dynamics.hpp"
#include "staleness/format.hpp"
#include "staleness/pssim.hpp"
#include "staleness/roots.hpp"
#include "staleness/stability.hpp"

namespace staleness::verify {
namespace fs = std::filesystem;

namespace {

struct Context {
  std::function<double(double, int)> analytic;
  fs::path dir;

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  }
};

struct Outcome {
  bool ok = false;
  std::string detail;
};

// Compact, locale-free number formatting for the one-line summaries.
std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string fd(double x) { return format_double(x); }

OptimizerFamily family_of(int variant, double m) {
  switch (variant) {
    case 0:
      return OptimizerFamily::plain();
    case 1:
      return OptimizerFamily::standard_momentum(m);
    default:
      return OptimizerFamily::shifted_momentum(m);
  }
}

std::string_view variant_name(int variant) { return to_string(family_of(variant, 0.0).variant); }

// --- 1 ---------------------------------------------------------------------

Outcome check_thresholds(const Context& ctx) {
  std::ostringstream csv;
  csv << "tau,eta_numeric,eta_analytic,abs_error\n";
  double worst = 0.0;
  int worst_tau = 0;
  for (int tau = 0; tau <= 64; ++tau) {
    const double numeric =
        numeric_threshold(OptimizerFamily::plain(), 1.0, DelayModel::constant(tau)).eta_star;
    const double analytic = ctx.analytic(1.0, tau);
    const double err = std::abs(numeric - analytic);
    if (!(err <= worst)) {
      worst = err;
      worst_tau = tau;
    }
    csv << tau << ',' << fd(numeric) << ',' << fd(analytic) << ',' << fd(err) << '\n';
  }
  ctx.write("thresholds.csv", csv.str());
  return {worst <= 1e-6, "max |numeric - analytic| = " + sci(worst) + " at tau=" +
                             std::to_string(worst_tau) + " over tau 0..64 (limit 1e-06)"};
}

// --- 2 ---------------------------------------------------------------------

Outcome check_taylor(const Context& ctx) {
  std::ostringstream csv;
  csv << "tau,inv_exact,inv_taylor,abs_error\n";
  double worst = 0.0;
  int worst_tau = 0;
  for (int tau = 1; tau <= 64; ++tau) {
    const double exact = 1.0 / ctx.analytic(1.0, tau);
    const double approx = taylor_inverse_threshold(tau);
    const double err = std::abs(exact - approx);
    if (!(err <= worst)) {
      worst = err;
      worst_tau = tau;
    }
    csv << tau << ',' << fd(exact) << ',' << fd(approx) << ',' << fd(err) << '\n';
  }
  ctx.write("taylor.csv", csv.str());
  return {worst < 0.05, "max |1/(a eta*) - (2 tau + 1)/pi| = " + sci(worst) + " at tau=" +
                            std::to_string(worst_tau) + " (limit 0.05)"};
}

// --- 3 ---------------------------------------------------------------------

Outcome check_inverse_linear(const Context& ctx) {
  std::vector<int> taus;
  for (int t = 4; t <= 64; ++t) taus.push_back(t);
  const auto delays = constant_delays(taus);
  const auto curve = threshold_curve(OptimizerFamily::plain(), 1.0, delays);
  ctx.write("inverse_linear.csv", curve.to_csv());
  const double want = 2.0 / std::numbers::pi;
  const double rel = std::abs(curve.fit.slope - want) / want;
  const bool ok = curve.failed_rows() == 0 && rel <= 0.02 && curve.fit.r_squared >= 0.999;
  return {ok, "slope " + sci(curve.fit.slope) + " vs 2/pi (rel err " + sci(rel) +
                  ", limit 0.02), R^2 " + sci(curve.fit.r_squared) + " (limit 0.999)"};
}

// --- 4 ---------------------------------------------------------------------

Outcome check_momentum(const Context& ctx) {
  std::ostringstream csv;
  csv << "variant,m,eta_star\n";
  const std::vector<double> ms{0.0, 0.5, 0.9};
  std::map<int, std::vector<double>> eta;
  for (int variant : {1, 2}) {
    for (double m : ms) {
      const double e =
          numeric_threshold(family_of(variant, m), 1.0, DelayModel::constant(16)).eta_star;
      eta[variant].push_back(e);
      csv << variant_name(variant) << ',' << fd(m) << ',' << fd(e) << '\n';
    }
  }
  ctx.write("momentum.csv", csv.str());
  const auto& s = eta[1];
  const auto& h = eta[2];
  const double gap_standard = std::min(s[0] - s[1], s[1] - s[2]);
  const double gap_shifted = std::min(h[2] - h[1], h[1] - h[0]);
  const bool ok = gap_standard >= 1e-4 && gap_shifted >= 1e-4;
  return {ok, "tau=16: momentum eta*(0,0.5,0.9) = " + sci(s[0]) + " > " + sci(s[1]) + " > " +
                  sci(s[2]) + "; shifted " + sci(h[0]) + " < " + sci(h[1]) + " < " + sci(h[2]) +
                  "; min gap " + sci(std::min(gap_standard, gap_shifted)) + " (limit 1e-04)"};
}

// --- 5 ---------------------------------------------------------------------

Outcome check_stochastic(const Context& ctx) {
  std::vector<DelayModel> uniform, gauss;
  for (int b = 1; b <= 64; ++b) uniform.push_back(pmf_uniform(1, b));
  for (int mu = 1; mu <= 30; ++mu) gauss.push_back(pmf_discrete_gaussian(mu));
  const auto cu = threshold_curve(OptimizerFamily::plain(), 1.0, uniform);
  const auto cg = threshold_curve(OptimizerFamily::plain(), 1.0, gauss);
  ctx.write("stochastic_uniform.csv", cu.to_csv());
  ctx.write("stochastic_gauss.csv", cg.to_csv());
  const bool ok = cu.failed_rows() == 0 && cg.failed_rows() == 0 && cu.fit.r_squared >= 0.99 &&
                  cg.fit.r_squared >= 0.99;
  return {ok, "R^2 of 1/(a eta*) vs E[tau]: uniform{1,b} " + sci(cu.fit.r_squared) +
                  ", gaussian(mu) " + sci(cg.fit.r_squared) + " (limit 0.99); failed rows " +
                  std::to_string(cu.failed_rows() + cg.failed_rows())};
}

// --- 6 ---------------------------------------------------------------------

Outcome check_sim_roots(const Context& ctx) {
  std::ostringstream csv;
  csv << "variant,m,tau,factor,eta,roots_stable,simulation\n";
  const auto problem = QuadraticProblem::scalar(1.0);
  const std::vector<int> taus{0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32};
  const std::vector<double> factors{0.25, 0.5, 0.8, 0.95, 1.05, 1.2, 1.5, 2.5};
  int points = 0, disagreements = 0;
  for (int variant = 0; variant < 3; ++variant) {
    const std::vector<double> ms = variant == 0 ? std::vector<double>{0.0}
                                                : std::vector<double>{0.3, 0.6, 0.9};
    for (double m : ms) {
      const auto family = family_of(variant, m);
      for (int tau : taus) {
        const auto delay = DelayModel::constant(tau);
        const double eta_star = numeric_threshold(family, 1.0, delay).eta_star;
        for (double f : factors) {
          const OptimizerSpec opt(family, f * eta_star);
          const bool stable = is_stable(char_poly(opt, 1.0, delay));
          SimConfig cfg;
          cfg.optimizer = opt;
          cfg.delay = delay;
          cfg.max_steps = empirical_probe_steps(tau);
          const auto v = simulate_expectation(problem, cfg);
          const auto want = stable ? SimStatus::kConverged : SimStatus::kDiverged;
          ++points;
          disagreements += v.status != want;
          csv << variant_name(variant) << ',' << fd(m) << ',' << tau << ',' << fd(f) << ','
              << fd(opt.eta()) << ',' << (stable ? "stable" : "unstable") << ','
              << to_string(v.status) << '\n';
        }
      }
    }
  }
  ctx.write("sim_roots.csv", csv.str());
  return {points >= 500 && disagreements == 0,
          std::to_string(disagreements) + " disagreements over " + std::to_string(points) +
              " grid points (need >= 500, zero disagreements)"};
}

// --- 7 ---------------------------------------------------------------------

Outcome check_mode_reduction(const Context& ctx) {
  std::ostringstream csv;
  csv << "matrix,dim,variant,m,tau,factor,eta,multi,top_mode,all_modes\n";
  const std::vector<double> factors{0.5, 0.9, 0.95, 1.05, 1.1, 1.5};
  int points = 0, disagreements = 0;
  for (int i = 0; i < 50; ++i) {
    const int dim = 2 + i % 7;
    const int variant = i % 3;
    const double m = variant == 0 ? 0.0 : 0.5;
    const int tau = (i * 5) % 13;
    const auto problem = QuadraticProblem::from_hessian(random_spd_matrix(dim, 1000 + i));
    const auto family = family_of(variant, m);
    const auto delay = DelayModel::constant(tau);
    const double a = problem.sharpness();
    const double eta_star = numeric_threshold(family, a, delay).eta_star;
    for (double f : factors) {
      SimConfig cfg;
      cfg.optimizer = OptimizerSpec(family, f * eta_star);
      cfg.delay = delay;
      cfg.max_steps = empirical_probe_steps(tau);
      cfg.init = InitSpec::random_unit(static_cast<std::uint64_t>(i));
      const auto multi = simulate_expectation(problem, cfg).status;
      SimConfig scalar_cfg = cfg;
      scalar_cfg.init = InitSpec::top_eigvec();
      const auto top = simulate_expectation(QuadraticProblem::scalar(a), scalar_cfg).status;
      bool all = true;
      for (Eigen::Index k = 0; k < problem.eigenvalues().size(); ++k) {
        const auto mode =
            simulate_expectation(QuadraticProblem::scalar(problem.eigenvalues()(k)), scalar_cfg);
        all = all && mode.status == SimStatus::kConverged;
      }
      const bool multi_ok = multi == SimStatus::kConverged;
      ++points;
      disagreements += multi == SimStatus::kUndecided || multi_ok != (top == SimStatus::kConverged) ||
                       multi_ok != all;
      csv << i << ',' << dim << ',' << variant_name(variant) << ',' << fd(m) << ',' << tau << ','
          << fd(f) << ',' << fd(cfg.optimizer.eta()) << ',' << to_string(multi) << ','
          << to_string(top) << ',' << (all ? "Converged" : "not_all_converged") << '\n';
    }
  }
  ctx.write("mode_reduction.csv", csv.str());
  return {disagreements == 0, std::to_string(disagreements) + " disagreements over " +
                                  std::to_string(points) + " (matrix, eta) pairs on 50 matrices"};
}

// --- 8 ---------------------------------------------------------------------

Outcome check_ps(const Context& ctx) {
  const std::vector<int> ws{2, 5, 9, 17, 33};
  std::ostringstream traj;
  traj << "problem,workers,variant,max_abs_diff\n";
  double worst_diff = 0.0;
  const std::vector<QuadraticProblem> problems{
      QuadraticProblem::scalar(1.0), QuadraticProblem::from_hessian(random_spd_matrix(4, 77))};
  for (std::size_t pi = 0; pi < problems.size(); ++pi) {
    const auto& p = problems[pi];
    for (int w : ws) {
      for (int variant = 0; variant < 3; ++variant) {
        const auto family = family_of(variant, 0.9);
        const double eta =
            0.8 * numeric_threshold(family, p.sharpness(), DelayModel::constant(w - 1)).eta_star;
        const OptimizerSpec opt(family, eta);
        const long steps = 3000;
        PSOptions ps_opts;
        ps_opts.record_states = true;
        ps_opts.blowup_factor = 1e300;
        ps_opts.decay_factor = 1e-300;
        const auto run = run_ps(p, Scheduler::round_robin(w), opt, steps, 0, ps_opts);
        SimConfig cfg;
        cfg.optimizer = opt;
        cfg.delay = DelayModel::constant(w - 1);
        cfg.max_steps = steps;
        cfg.record_states = true;
        cfg.blowup_factor = 1e300;
        cfg.decay_factor = 1e-300;
        const auto sim = simulate_expectation(p, cfg);
        double diff = run.verdict.states.size() == sim.states.size() ? 0.0 : INFINITY;
        for (std::size_t t = 0; t < std::min(sim.states.size(), run.verdict.states.size()); ++t) {
          diff = std::max(diff, (run.verdict.states[t] - sim.states[t]).lpNorm<Eigen::Infinity>());
        }
        worst_diff = std::max(worst_diff, diff);
        traj << pi << ',' << w << ',' << variant_name(variant) << ',' << fd(diff) << '\n';
      }
    }
  }
  ctx.write("ps_trajectories.csv", traj.str());

  std::ostringstream thr;
  thr << "workers,eta_ps,eta_analytic,rel_error\n";
  double worst_rel = 0.0;
  for (int w : ws) {
    const double got = ps_empirical_threshold(QuadraticProblem::scalar(1.0),
                                              Scheduler::round_robin(w), OptimizerFamily::plain())
                           .eta_star;
    const double want = ctx.analytic(1.0, w - 1);
    const double rel = std::abs(got - want) / want;
    worst_rel = std::max(worst_rel, rel);
    thr << w << ',' << fd(got) << ',' << fd(want) << ',' << fd(rel) << '\n';
  }
  ctx.write("ps_thresholds.csv", thr.str());
  return {worst_diff <= 1e-12 && worst_rel <= 0.02,
          "max per-step |PS - constant delay| = " + sci(worst_diff) +
              " (limit 1e-12); max PS threshold rel err " + sci(worst_rel) + " (limit 0.02)"};
}

// --- 9 ---------------------------------------------------------------------

Outcome check_empirical(const Context& ctx) {
  std::ostringstream csv;
  csv << "variant,m,tau,eta_empirical,eta_reference,reference,rel_error\n";
  const auto problem = QuadraticProblem::scalar(1.0);
  double worst = 0.0;
  auto row = [&](int variant, double m, int tau, double got, double want, std::string_view ref) {
    const double rel = std::abs(got - want) / want;
    worst = std::max(worst, rel);
    csv << variant_name(variant) << ',' << fd(m) << ',' << tau << ',' << fd(got) << ','
        << fd(want) << ',' << ref << ',' << fd(rel) << '\n';
  };
  for (int tau : {1, 4, 16}) {
    const auto delay = DelayModel::constant(tau);
    row(0, 0.0, tau, empirical_threshold(problem, OptimizerFamily::plain(), delay).eta_star,
        ctx.analytic(1.0, tau), "analytic");
  }
  for (int variant : {1, 2}) {
    for (double m : {0.5, 0.9}) {
      const auto delay = DelayModel::constant(16);
      const auto family = family_of(variant, m);
      row(variant, m, 16, empirical_threshold(problem, family, delay).eta_star,
          numeric_threshold(family, 1.0, delay).eta_star, "roots");
    }
  }
  ctx.write("empirical.csv", csv.str());
  return {worst <= 0.02, "max rel err of simulated threshold " + sci(worst) + " (limit 0.02)"};
}

// --- 10 --------------------------------------------------------------------

Outcome check_power_iteration(const Context& ctx) {
  std::ostringstream csv;
  csv << "matrix,dim,lambda_power,lambda_dense,rel_error,iterations\n";
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int dim = 1 + (i * 13) % 64;
    const Eigen::MatrixXd h = random_spd_matrix(dim, 5000 + static_cast<std::uint64_t>(i));
    const double dense =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues()
            .maxCoeff();
    const auto r = power_iteration([&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return h * v; },
                                   dim, 1e-10, 100000, static_cast<std::uint64_t>(i));
    const double rel = std::abs(r.lambda_max - dense) / dense;
    worst = std::max(worst, rel);
    csv << i << ',' << dim << ',' << fd(r.lambda_max) << ',' << fd(dense) << ',' << fd(rel) << ','
        << r.iterations << '\n';
  }
  ctx.write("power_iteration.csv", csv.str());
  return {worst <= 1e-6, "max rel err vs dense eigensolve " + sci(worst) +
                             " over 50 matrices, d <= 64 (limit 1e-06)"};
}

// --- 11 --------------------------------------------------------------------

std::vector<double> expand_roots(const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  std::vector<double> out;
  for (const auto& x : c) out.push_back(x.real());
  return out;
}

// Conjugate pairs (adjacent) plus at most one real root, moduli in [lo, hi).
std::vector<std::complex<double>> random_real_roots(std::mt19937_64& rng, int degree, double lo,
                                                    double hi) {
  std::uniform_real_distribution<double> mod(lo, hi);
  std::uniform_real_distribution<double> arg(0.0, std::numbers::pi);
  std::vector<std::complex<double>> r;
  while (static_cast<int>(r.size()) + 1 < degree) {
    const auto z = std::polar(mod(rng), arg(rng));
    r.push_back(z);
    r.push_back(std::conj(z));
  }
  if (static_cast<int>(r.size()) < degree) r.emplace_back(rng() % 2 ? mod(rng) : -mod(rng));
  return r;
}

Outcome check_roots(const Context& ctx) {
  std::ostringstream csv;
  csv << "case,kind,degree,max_residual,conjugate_error,log_product_error,verdict\n";
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  int failures = 0;
  double worst_res = 0.0, worst_conj = 0.0, worst_prod = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int degree = 1 + static_cast<int>(rng() % 80);
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    for (auto& x : c) x = normal(rng);
    const Polynomial p(c);
    const auto rs = all_roots(p);
    double conj_err = 0.0;
    double log_product = 0.0;
    for (const auto& z : rs.roots) {
      log_product += std::log(std::abs(z));
      double best = INFINITY;
      for (const auto& w : rs.roots) best = std::min(best, std::abs(w - std::conj(z)));
      conj_err = std::max(conj_err, best / std::max(1.0, std::abs(z)));
    }
    // Relative error of the product of magnitudes, via logs.
    const double prod_err =
        std::abs(std::expm1(log_product - std::log(std::abs(p[0] / p.leading()))));
    const bool ok = static_cast<int>(rs.roots.size()) == p.degree() &&
                    rs.max_residual() <= kMaxScaledResidual && conj_err <= 1e-9 &&
                    prod_err <= 1e-8;
    failures += !ok;
    worst_res = std::max(worst_res, rs.max_residual());
    worst_conj = std::max(worst_conj, conj_err);
    worst_prod = std::max(worst_prod, prod_err);
    csv << i << ",random," << p.degree() << ',' << fd(rs.max_residual()) << ',' << fd(conj_err)
        << ',' << fd(prod_err) << ',' << (ok ? "ok" : "FAIL") << '\n';
  }
  int fuzz_failures = 0;
  std::uniform_real_distribution<double> outer(1.05, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const int degree = 1 + static_cast<int>(rng() % 80);
    const auto inside = random_real_roots(rng, degree, 0.0, 0.95);
    auto outside = inside;
    std::size_t k = rng() % outside.size();
    const double r = outer(rng);
    if (outside[k].imag() != 0.0) {
      k -= k % 2;
      outside[k] *= r / std::abs(outside[k]);
      outside[k + 1] = std::conj(outside[k]);
    } else {
      outside[k] = outside[k].real() < 0.0 ? -r : r;
    }
    const bool stable_ok = is_stable(Polynomial(expand_roots(inside)));
    const bool unstable_ok = !is_stable(Polynomial(expand_roots(outside)));
    fuzz_failures += !stable_ok + !unstable_ok;
    csv << i << ",fuzz," << degree << ",,,," << (stable_ok && unstable_ok ? "ok" : "FAIL") << '\n';
  }
  ctx.write("roots.csv", csv.str());
  return {failures == 0 && fuzz_failures == 0,
          std::to_string(failures) + "/1000 invariant failures (max residual " + sci(worst_res) +
              ", conjugate err " + sci(worst_conj) + ", product err " + sci(worst_prod) + "); " +
              std::to_string(fuzz_failures) + "/2000 fuzz-stability misclassifications"};
}

using Check = Outcome (*)(const Context&);

struct Entry {
  CriterionInfo info;
  Check check;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {{1, "thresholds", "numeric plain threshold equals 2 sin(pi/(4 tau + 2)), tau 0..64", 30},
       check_thresholds},
      {{2, "taylor", "|1/(a eta*) - (2 tau + 1)/pi| < 0.05 for tau 1..64", 1}, check_taylor},
      {{3, "inverse-linear", "1/(a eta*) vs tau: slope 2/pi within 2%, R^2 >= 0.999", 30},
       check_inverse_linear},
      {{4, "momentum", "momentum lowers, shifted momentum raises the tau = 16 threshold", 10},
       check_momentum},
      {{5, "stochastic", "uniform and discrete-Gaussian delays: 1/(a eta*) linear in E[tau]", 120},
       check_stochastic},
      {{6, "sim-roots", "simulated verdicts agree with root stability on >= 500 points", 120},
       check_sim_roots},
      {{7, "mode-reduction", "multi-dimensional verdict equals the top-mode and all-mode verdicts",
        60},
       check_mode_reduction},
      {{8, "ps", "round robin realizes constant delay; PS thresholds match within 2%", 60},
       check_ps},
      {{9, "empirical", "simulated thresholds match analytic / root thresholds within 2%", 60},
       check_empirical},
      {{10, "power-iteration", "power iteration within 1e-6 of a dense eigensolve", 30},
       check_power_iteration},
      {{11, "roots", "root-finder invariants on 1000 random polynomials up to degree 80", 60},
       check_roots},
      {{12, "determinism", "a second run produces byte-identical artifacts and table", 0},
       nullptr},
  };
  return entries;
}

constexpr int kDeterminismId = 12;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path make_temp_dir(std::string_view tag) {
  static std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const auto p = fs::temp_directory_path() /
                   ("staleness-verify-" + std::string(tag) + "-" + std::to_string(rd()));
    if (fs::create_directory(p)) return p;
  }
  throw std::runtime_error("cannot create a temporary directory");
}

struct Pass {
  std::vector<CriterionResult> results;
};

// Runs the given (non-determinism) criteria, writing artifacts into `dir`.
Pass run_pass(const std::vector<const Entry*>& entries, const Context& ctx, bool enforce_budgets,
              std::ostream* progress) {
  Pass pass;
  for (const Entry* e : entries) {
    CriterionResult r;
    r.id = e->info.id;
    r.name = std::string(e->info.name);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto outcome = e->check(ctx);
      r.passed = outcome.ok;
      r.detail = outcome.detail;
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (enforce_budgets && e->info.budget_seconds > 0 && r.seconds > e->info.budget_seconds) {
      r.passed = false;
      r.detail += "; over the " + sci(e->info.budget_seconds) + " s budget";
    }
    if (progress) {
      *progress << (r.passed ? "PASS" : "FAIL") << "  " << r.id << ' ' << r.name << "  ("
                << sci(r.seconds) << " s)  " << r.detail << std::endl;
    }
    pass.results.push_back(std::move(r));
  }
  return pass;
}

std::string table_of(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.id << ' ' << r.name << "  " << r.detail
        << '\n';
  }
  return out.str();
}

// Compares every regular file under a and b byte for byte.
std::vector<std::string> compare_dirs(const fs::path& a, const fs::path& b) {
  std::set<std::string> names;
  for (const auto& dir : {a, b}) {
    for (const auto& f : fs::directory_iterator(dir)) {
      if (f.is_regular_file()) names.insert(f.path().filename().string());
    }
  }
  std::vector<std::string> mismatched;
  for (const auto& n : names) {
    if (!fs::exists(a / n) || !fs::exists(b / n) || read_file(a / n) != read_file(b / n)) {
      mismatched.push_back(n);
    }
  }
  return mismatched;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> infos = [] {
    std::vector<CriterionInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

bool VerifyReport::all_passed() const noexcept {
  return !results.empty() &&
         std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

std::string VerifyReport::table() const { return table_of(results); }

VerifyReport run_verify(const VerifyOptions& options, std::ostream* progress) {
  std::set<std::string> wanted(options.only.begin(), options.only.end());
  for (const auto& name : wanted) {
    const bool known = std::any_of(registry().begin(), registry().end(),
                                   [&](const Entry& e) { return e.info.name == name; });
    if (!known) throw std::invalid_argument("unknown criterion '" + name + "'");
  }
  const auto selected = [&](const Entry& e) {
    return wanted.empty() || wanted.count(std::string(e.info.name)) > 0;
  };

  std::vector<const Entry*> checks, all_checks;
  bool determinism = false;
  for (const auto& e : registry()) {
    if (e.info.id == kDeterminismId) {
      determinism = selected(e);
      continue;
    }
    all_checks.push_back(&e);
    if (selected(e)) checks.push_back(&e);
  }

  const bool own_dir = !options.out_dir;
  const fs::path root = own_dir ? make_temp_dir("run") : *options.out_dir;
  fs::create_directories(root);

  Context ctx;
  ctx.analytic = options.analytic_threshold
                     ? options.analytic_threshold
                     : std::function<double(double, int)>(analytic_threshold_plain);
  ctx.dir = root;

  VerifyReport report;
  auto first = run_pass(checks, ctx, options.enforce_budgets, progress);
  report.results = first.results;

  if (determinism) {
    CriterionResult r;
    r.id = kDeterminismId;
    r.name = "determinism";
    const auto t0 = std::chrono::steady_clock::now();
    try {
      // Compare two fresh runs of the full suite when only this criterion was
      // asked for; otherwise rerun what was just run.
      Context run_a = ctx;
      std::vector<CriterionResult> results_a = first.results;
      const auto& subject = checks.empty() ? all_checks : checks;
      std::optional<fs::path> scratch_a;
      if (checks.empty()) {
        scratch_a = root / "determinism_run_a";
        fs::create_directories(*scratch_a);
        run_a.dir = *scratch_a;
        results_a = run_pass(subject, run_a, false, nullptr).results;
      }
      const fs::path dir_b = root / "determinism_run_b";
      fs::create_directories(dir_b);
      Context run_b = ctx;
      run_b.dir = dir_b;
      const auto results_b = run_pass(subject, run_b, false, nullptr).results;

      auto strip_budget = [](std::vector<CriterionResult> rs) {
        for (auto& x : rs) {
          const auto pos = x.detail.find("; over the ");
          if (pos != std::string::npos) x.detail.resize(pos);
        }
        return rs;
      };
      const auto mismatched = compare_dirs(run_a.dir, dir_b);
      const bool tables_equal = table_of(strip_budget(results_a)) == table_of(strip_budget(results_b));
      std::size_t files = 0;
      for (const auto& f : fs::directory_iterator(dir_b)) files += f.is_regular_file();
      r.passed = mismatched.empty() && tables_equal && files > 0;
      r.detail = std::to_string(files) + " artifacts compared, " +
                 std::to_string(mismatched.size()) + " differ" +
                 (mismatched.empty() ? "" : " (first: " + mismatched.front() + ")") +
                 "; pass/fail tables " + (tables_equal ? "identical" : "differ");
      fs::remove_all(dir_b);
      if (scratch_a) fs::remove_all(*scratch_a);
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) {
      *progress << (r.passed ? "PASS" : "FAIL") << "  " << r.id << ' ' << r.name << "  ("
                << sci(r.seconds) << " s)  " << r.detail << std::endl;
    }
    report.results.push_back(std::move(r));
  }

  ctx.write("results.txt", report.table());
  if (own_dir) fs::remove_all(root);
  return report;
}

}  // namespace staleness::verify
