// Copyright 2026 The sdiscreen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sdiscreen/cli.hpp"
#include "sdiscreen/experiments.hpp"
#include "sdiscreen/numeric.hpp"
#include "sdiscreen/oracle.hpp"
#include "sdiscreen/rng.hpp"
#include "sdiscreen/screening.hpp"
#include "sdiscreen/stump.hpp"
#include "sdiscreen/synthetic.hpp"
#include "test_support.hpp"

namespace {

using namespace sdiscreen;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(bool pass, const char* id, const std::string& what, const std::string& detail) {
  std::printf("[%s] %s %s -- %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

ModelSpec bench_model(const std::string& label, std::size_t n, std::size_t s) {
  ModelSpec spec;  // p = 200, sigma = 0.1
  if (label == "model1b") spec.rho = 0.5;
  if (label == "model2a" || label == "model2b") {
    spec.family = ModelFamily::Model2;
    spec.component = label == "model2a" ? Component::Square : Component::Cosine;
  }
  spec.n = n;
  spec.s = s;
  return spec;
}

unsigned workers() { return default_workers(); }

// 1. Fast stump search equals the brute-force oracle.
void oracle_equivalence() {
  const auto t0 = Clock::now();
  Stream rng(derive_key(0xacce, 1));
  int mismatches = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = testing::random_xy(rng, 2, 200);
    const auto fast = fit_optimal_stump(d.x, d.y);
    const auto slow = brute_force_oracle(d.x, d.y);
    const double diff = std::abs(fast.delta - slow.delta);
    worst = std::max(worst, diff);
    if (fast.degenerate != slow.degenerate || fast.split_value != slow.split_value ||
        fast.left_count != slow.left_count || !(diff < 1e-12)) {
      ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  report(mismatches == 0 && secs < 10.0, "C1", "oracle equivalence (1000 datasets, n in [2,200])",
         std::to_string(mismatches) + " mismatches, max |ddelta| " + fmt("%.3g", worst) + ", " +
             fmt("%.2f s", secs));
}

// 2. Algebraic identities and invariances.
void identity_suite() {
  Stream rng(derive_key(0xacce, 2));
  int forms = 0, corr = 0, range = 0, monotone = 0, lemma = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto d = testing::random_xy(rng, 2, 200);
    const double var = plugin_variance(d.y);
    const double x_max = *std::max_element(d.x.begin(), d.x.end());
    std::vector<double> seen;
    for (double z : d.x) {
      if (z >= x_max || std::find(seen.begin(), seen.end(), z) != seen.end()) continue;
      seen.push_back(z);
      const double a = impurity_reduction_at_split(d.x, d.y, z);
      const double b = impurity_reduction_product_form(d.x, d.y, z);
      // Relative to the larger of delta and Var(y): at delta ~ 0 the SSE form
      // carries cancellation error of order eps * Var(y).
      if (std::abs(a - b) > 1e-10 * std::max(std::abs(b), var)) ++forms;
    }
    const auto fit = fit_optimal_stump(d.x, d.y);
    if (var > 0.0) {
      const double r = stump_correlation(fit, d.x, d.y);
      if (std::abs(fit.delta - var * r * r) > 1e-8 * std::max(fit.delta, 1e-8 * var)) ++corr;
    }
    if (fit.delta < 0.0 || fit.delta > var * (1 + 1e-12)) ++range;
    for (int k = 0; k < 2; ++k) {
      std::vector<double> tx(d.x.size());
      auto phi = [k](double v) { return k == 0 ? std::exp(v) : v * v * v; };
      std::transform(d.x.begin(), d.x.end(), tx.begin(), phi);
      const auto t = fit_optimal_stump(tx, d.y);
      if (t.left_count != fit.left_count || t.split_value != phi(fit.split_value) ||
          std::abs(t.delta - fit.delta) > 1e-12 * std::max(1.0, fit.delta)) {
        ++monotone;
      }
    }
    if (fit.delta * (1 + 1e-12) + 1e-15 < linear_signal_lower_bound(d.x, d.y)) ++lemma;
  }
  const int total = forms + corr + range + monotone + lemma;
  report(total == 0, "C2", "identity suite (1000 datasets)",
         "violations: forms " + std::to_string(forms) + ", correlation " + std::to_string(corr) +
             ", range " + std::to_string(range) + ", monotone " + std::to_string(monotone) +
             ", lower bound " + std::to_string(lemma));
}

// 3. Null upper tail: delta <= xi^2 with xi^2 = 12 sigma_Y^2 log(4 n R) / n.
void null_tail_bound() {
  const std::size_t n = 1000;
  const int reps = 500;
  const double sigma_y2 = 1.0;  // y ~ N(0, 1) is sub-Gaussian with parameter 1
  const double xi2 = 12.0 * sigma_y2 * std::log(4.0 * n * reps) / n;
  std::vector<double> ratio;
  int exceed = 0;
  for (int r = 0; r < reps; ++r) {
    Stream rng(derive_key(0xacce3, r));
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    const double delta = fit_optimal_stump(x, y).delta;
    exceed += delta > xi2 ? 1 : 0;
    ratio.push_back(delta / plugin_variance(y));
  }
  std::sort(ratio.begin(), ratio.end());
  const double p99 = ratio[static_cast<std::size_t>(0.99 * reps) - 1];
  report(exceed <= reps / 100, "C3", "null tail bound (n=1000, 500 reps)",
         std::to_string(exceed) + " exceed xi^2=" + fmt("%.4f", xi2) +
             ", 99th pct delta/Var(y)=" + fmt("%.4f", p99));
}

// 4. Exact recovery on the linear model.
void exact_recovery_linear() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  cfg.spec_grid = {bench_model("model1a", 1000, 4)};
  cfg.replications = 50;
  cfg.master_seed = 4;
  cfg.workers = workers();
  const auto res = run_exact_recovery(cfg);
  const double sdi = *res.find("SDI", 1000, 4, "model1a").exact_recovery;
  const double sis = *res.find("SIS", 1000, 4, "model1a").exact_recovery;
  const double secs = seconds_since(t0);
  report(sdi >= 0.9 && sis >= 0.9 && secs < 120.0, "C4",
         "exact recovery, model1a s=4 n=1000 (50 reps)",
         "SDI " + fmt("%.2f", sdi) + ", SIS " + fmt("%.2f", sis) + ", " + fmt("%.1f s", secs));
}

// 5. SDI beats SIS on the cosine model; SIS is at chance.
void nonlinear_separation() {
  ExperimentConfig cfg;
  cfg.spec_grid = {bench_model("model2b", 1000, 10)};
  cfg.replications = 10;
  cfg.master_seed = 5;
  cfg.workers = workers();
  const auto res = run_partial_recovery(cfg);
  const double sdi = *res.find("SDI", 1000, 10, "model2b").partial_recovery;
  const double sis = *res.find("SIS", 1000, 10, "model2b").partial_recovery;
  const double p = 200, s = 10;
  const double q = s / p;
  // Standard error of the mean recovered fraction under uniformly random
  // selection (hypergeometric), over the replications.
  const double se = std::sqrt(q * (1 - q) * (p - s) / ((p - 1) * s) / cfg.replications);
  const bool pass = sdi - sis >= 0.3 && std::abs(sis - q) <= 3 * se;
  report(pass, "C5", "nonlinear separation, model2b s=10 n=1000 (10 reps)",
         "SDI " + fmt("%.3f", sdi) + ", SIS " + fmt("%.3f", sis) + ", baseline " + fmt("%.3f", q) +
             " +/- 3*" + fmt("%.4f", se));
}

// 6. SDI and SIS agree on linear data.
void agreement() {
  ExperimentConfig cfg;
  cfg.spec_grid = {bench_model("model1a", 1000, 4)};
  cfg.replications = 50;
  cfg.master_seed = 6;
  cfg.workers = workers();
  const double a = *run_sdi_sis_agreement(cfg).find("SDI~SIS", 1000, 4, "model1a").ranking_agreement;
  report(a >= 0.8, "C6", "SDI/SIS top-4 agreement, model1a n=1000 (50 reps)", fmt("%.2f", a));
}

// 7. Data-driven thresholds.
void threshold_studies() {
  ExperimentConfig cfg;
  cfg.spec_grid = {bench_model("model1a", 1000, 4), bench_model("model1b", 1000, 4)};
  cfg.selection = SelectionRule::Permutation;
  cfg.permutations = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  cfg.replications = 50;
  cfg.master_seed = 7;
  cfg.workers = workers();
  const auto perm = run_threshold_study(cfg);
  std::string curve;
  for (int t = 1; t <= 10; ++t) {
    curve += fmt("%.2f ", *perm.find("SDI-permutation-T" + std::to_string(t), 1000, 4, "model1a")
                              .exact_recovery);
  }
  const auto& a = perm.find("SDI-permutation-T10", 1000, 4, "model1a");
  report(*a.exact_recovery >= 0.8, "C7a", "permutation T=10, model1a s=4 n=1000 (50 reps)",
         "exact " + fmt("%.2f", *a.exact_recovery) + ", by T=1..10: " + curve);
  const auto& b = perm.find("SDI-permutation-T10", 1000, 4, "model1b");
  report(*b.selected_size_mean >= 8.0, "C7b", "permutation over-selects on model1b (rho=0.5)",
         "mean selected " + fmt("%.1f", *b.selected_size_mean) + ", gamma " +
             fmt("%.4f", *b.gamma_mean));

  ExperimentConfig elbow;
  for (const char* m : {"model1a", "model1b", "model2a", "model2b"}) {
    for (std::size_t s = 5; s <= 50; s += 5) elbow.spec_grid.push_back(bench_model(m, 1000, s));
  }
  elbow.selection = SelectionRule::Elbow;
  elbow.replications = 50;
  elbow.master_seed = 8;
  elbow.workers = workers();
  const auto res = run_threshold_study(elbow);
  for (const char* m : {"model1a", "model1b", "model2a", "model2b"}) {
    const bool correlated = std::string(m) == "model1b";
    bool ok = true;
    std::string detail;
    for (std::size_t s = 5; s <= 50; s += 5) {
      const double mean_size = *res.find("SDI-elbow", 1000, s, m).selected_size_mean;
      const double tol = correlated ? std::max(5.0, 0.5 * s) : std::max(2.0, 0.25 * s);
      ok = ok && std::abs(mean_size - static_cast<double>(s)) <= tol;
      detail += std::to_string(s) + ":" + fmt("%.1f", mean_size) + " ";
    }
    report(ok, "C7c", std::string("elbow/GMM support size, ") + m +
                          (correlated ? " (bound max(5, s/2))" : " (bound max(2, s/4))"),
           detail);
  }
}

// 8. Runtime grows like n log n.
void complexity() {
  const std::size_t p = 50;
  std::vector<double> log_n, log_t;
  std::string detail;
  for (std::size_t n : {10000u, 100000u, 1000000u}) {
    ModelSpec spec;
    spec.family = ModelFamily::Model2;
    spec.component = Component::Square;
    spec.n = n;
    spec.p = p;
    spec.s = 5;
    spec.seed = 9;
    const auto sample = generate(spec);
    double best = 1e300;
    const int repeats = n >= 1000000 ? 2 : 5;
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = Clock::now();
      const auto ranking = rank_sdi(sample.data, 1);
      best = std::min(best, seconds_since(t0));
      if (ranking.order.size() != p) std::abort();
    }
    log_n.push_back(std::log(static_cast<double>(n)));
    log_t.push_back(std::log(best));
    detail += "n=" + std::to_string(n) + ":" + fmt("%.3fs ", best);
  }
  const double mx = (log_n[0] + log_n[1] + log_n[2]) / 3, my = (log_t[0] + log_t[1] + log_t[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (log_n[i] - mx) * (log_t[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  const double slope = sxy / sxx;
  report(slope >= 0.9 && slope <= 1.3, "C8", "rank_sdi scaling exponent, p=50",
         "slope " + fmt("%.3f", slope) + " (" + detail + ")");
}

// 9. Bench output does not depend on parallelism.
void determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sdiscreen_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::string> configs = {
      R"({"experiment": "partial_recovery", "models": ["model1a", "model2b"], "n": [300],
          "s": [5, 10], "replications": 6, "master_seed": 91})",
      R"({"experiment": "threshold_study", "models": ["model1b"], "n": 300, "s": 4,
          "threshold_method": "permutation", "permutations": [1, 3], "replications": 4,
          "master_seed": 92})",
      R"({"experiment": "threshold_study", "models": ["model2a"], "n": 300, "s": [4, 8],
          "threshold_method": "elbow", "replications": 5, "master_seed": 93})",
      R"({"experiment": "sdi_sis_agreement", "models": ["model1a"], "n": [200, 400], "s": 3,
          "replications": 5, "master_seed": 94})"};
  bool same = true;
  std::string detail;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const fs::path cfg = dir / ("cfg" + std::to_string(c) + ".json");
    std::ofstream(cfg) << configs[c];
    std::vector<std::string> outputs;
    for (unsigned w : {1u, 2u, 4u}) {
      const fs::path out = dir / ("out" + std::to_string(c) + "_" + std::to_string(w));
      std::ostringstream sink, err;
      if (cli::cmd_bench({cfg.string(), out.string(), w}, sink, err) != 0) {
        same = false;
        detail += "bench failed: " + err.str();
      }
      for (const char* f : {"results.csv", "results.json"}) {
        std::ifstream in(out / f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        outputs.push_back(ss.str());
      }
    }
    for (std::size_t k = 2; k < outputs.size(); ++k) same = same && outputs[k] == outputs[k % 2];
  }
  fs::remove_all(dir);
  report(same, "C9", "bench output identical for 1, 2 and 4 workers",
         std::to_string(configs.size()) + " configs" + (detail.empty() ? "" : ": " + detail));
}

}  // namespace

int main() {
  oracle_equivalence();
  identity_suite();
  null_tail_bound();
  exact_recovery_linear();
  nonlinear_separation();
  agreement();
  threshold_studies();
  complexity();
  determinism();
  std::printf("%s: %d criterion line(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures;
}
