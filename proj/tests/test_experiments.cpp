#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wm/experiments.hpp"
#include "wm/fixtures.hpp"
#include "wm/markov.hpp"
#include "wm/model.hpp"

using wm::AccuracyCurve;
using wm::MarkovChain;
using wm::ReconstructionConfig;

namespace {

MarkovChain chain(const std::string& fixture) { return MarkovChain(wm::fixture(fixture)); }

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("exponential fit recovers exact decay data") {
  AccuracyCurve curve;
  for (int b = 0; b <= 50; ++b) {
    curve.beta.push_back(b);
    curve.alpha.push_back(1.0 - 0.5 * std::exp(-b / 10.0));
    curve.n.push_back(1000000);
  }
  wm::ExpFit fit = wm::fit_exponential_decay(curve);
  CHECK(fit.A == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(fit.tau == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(fit.rows_used == 51);
}

TEST_CASE("exponential fit drops rows near perfect accuracy") {
  AccuracyCurve curve;
  for (int b = 0; b <= 5; ++b) {
    curve.beta.push_back(b);
    curve.alpha.push_back(b < 3 ? 1.0 - 0.5 * std::exp(-b) : 0.999999);
    curve.n.push_back(100); /* rows with miss < 0.1 are unresolvable */
  }
  CHECK_THROWS_WITH(wm::fit_exponential_decay(curve),
                    "too few resolvable rows for a decay fit (2)");
  AccuracyCurve rising;
  for (int b = 0; b <= 3; ++b) {
    rising.beta.push_back(b);
    rising.alpha.push_back(0.9 - 0.1 * b);
    rising.n.push_back(1000000);
  }
  CHECK_THROWS_WITH(wm::fit_exponential_decay(rising), "accuracy curve shows no decay");
}

TEST_CASE("reconstruction validates its configuration") {
  MarkovChain c = chain("excursions_p");
  ReconstructionConfig cfg;
  cfg.traversals = 0;
  CHECK_THROWS_WITH(wm::run_reconstruction_experiment(c, cfg), "traversals must be at least 1");
  cfg = {};
  cfg.steps = 0;
  CHECK_THROWS_WITH(wm::run_reconstruction_experiment(c, cfg), "steps must be at least 1");
  cfg = {};
  cfg.steps = 50;
  cfg.beta_max = 50;
  CHECK_THROWS_WITH(wm::run_reconstruction_experiment(c, cfg),
                    "beta_max must lie in [0, steps-1]");
  cfg = {};
  cfg.beta_max = -1;
  CHECK_THROWS_WITH(wm::run_reconstruction_experiment(c, cfg),
                    "beta_max must lie in [0, steps-1]");
  cfg = {};
  cfg.threads = 0;
  CHECK_THROWS_WITH(wm::run_reconstruction_experiment(c, cfg), "threads must be at least 1");
  CHECK_THROWS_WITH(wm::estimate_conditional_entropy_rate(c, 0, 10, 0, 0),
                    "T must be at least 1");
  CHECK_THROWS_WITH(wm::estimate_conditional_entropy_rate(c, 10, 0, 0, 0),
                    "n_samples must be at least 1");
  CHECK_THROWS_WITH(wm::estimate_conditional_entropy_rate(c, 10, 10, 0, 0, 0),
                    "threads must be at least 1");
}

TEST_CASE("reconstruction curves are seeded and thread-count invariant") {
  MarkovChain c = chain("excursions_p");
  ReconstructionConfig cfg;
  cfg.traversals = 120;
  cfg.steps = 40;
  cfg.beta_max = 20;
  cfg.seed = 5;
  AccuracyCurve a = wm::run_reconstruction_experiment(c, cfg);
  AccuracyCurve b = wm::run_reconstruction_experiment(c, cfg);
  cfg.threads = 3;
  AccuracyCurve t = wm::run_reconstruction_experiment(c, cfg);
  REQUIRE(a.alpha.size() == 21);
  CHECK(a.beta.front() == 0);
  CHECK(a.beta.back() == 20);
  for (size_t i = 0; i < a.alpha.size(); ++i) {
    CHECK(a.alpha[i] == b.alpha[i]);
    CHECK(a.alpha[i] == t.alpha[i]);
    CHECK(a.alpha[i] >= 0.0);
    CHECK(a.alpha[i] <= 1.0);
    CHECK(a.n[i] == 120);
  }
  cfg.threads = 1;
  cfg.seed = 6;
  AccuracyCurve d = wm::run_reconstruction_experiment(c, cfg);
  bool differs = false;
  for (size_t i = 0; i < a.alpha.size(); ++i)
    if (a.alpha[i] != d.alpha[i]) differs = true;
  CHECK(differs);
}

TEST_CASE("reconstruction of an unambiguous chain is error-free") {
  /* distinct colors make decoding exact, so every row is dropped by the fit */
  MarkovChain c(wm::parse_model(
      "weakmodel v1\ncolors B R\nnode a B\nnode b R\nedge a b 1\nedge b a 1\n"));
  ReconstructionConfig cfg;
  cfg.traversals = 50;
  cfg.steps = 20;
  cfg.beta_max = 10;
  AccuracyCurve curve = wm::run_reconstruction_experiment(c, cfg);
  for (double al : curve.alpha) CHECK(al == 1.0);
  CHECK_THROWS_WITH(wm::fit_exponential_decay(curve),
                    "too few resolvable rows for a decay fit (0)");
}

TEST_CASE("reconstruction of an ambiguous ring never decodes the true phase") {
  /* BRBR... fits two phases; the decoder settles on the lexicographic one */
  MarkovChain c = chain("ring4_p");
  ReconstructionConfig cfg;
  cfg.traversals = 30;
  cfg.steps = 16;
  cfg.beta_max = 8;
  AccuracyCurve curve = wm::run_reconstruction_experiment(c, cfg);
  bool all_zero = true, all_one = true;
  for (double al : curve.alpha) {
    if (al != 0.0) all_zero = false;
    if (al != 1.0) all_one = false;
  }
  CHECK((all_zero || all_one));
  CHECK_THROWS(wm::fit_exponential_decay(curve));
}

TEST_CASE("entropy estimate on a deterministic-observation fixture") {
  MarkovChain c = chain("hub_p");
  wm::EntropyEstimate est = wm::estimate_conditional_entropy_rate(c, 10, 6, 0, 0);
  CHECK(est.T == 10);
  CHECK(est.n_samples == 6);
  /* BRBR...: every R is an independent coin flip, y itself carries nothing */
  CHECK(est.bits_per_step == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.stderr_ == 0.0);
  CHECK(est.y_rate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(est.y_rate_stderr == 0.0);
  CHECK(est.x_rate_exact == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.x_rate_stationary == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.cross_check == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.identity_mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(est.identity_stderr == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("entropy estimate is seeded and thread-count invariant") {
  MarkovChain c = chain("excursions_p");
  wm::EntropyEstimate a = wm::estimate_conditional_entropy_rate(c, 30, 40, 0, 9);
  wm::EntropyEstimate b = wm::estimate_conditional_entropy_rate(c, 30, 40, 0, 9);
  wm::EntropyEstimate t = wm::estimate_conditional_entropy_rate(c, 30, 40, 0, 9, 3);
  CHECK(a.bits_per_step == b.bits_per_step);
  CHECK(a.bits_per_step == t.bits_per_step);
  CHECK(a.stderr_ == t.stderr_);
  CHECK(a.y_rate == t.y_rate);
  CHECK(a.identity_mean == t.identity_mean);
  CHECK(a.identity_stderr == t.identity_stderr);
  wm::EntropyEstimate d = wm::estimate_conditional_entropy_rate(c, 30, 40, 0, 10);
  CHECK(a.bits_per_step != d.bits_per_step);
}

TEST_CASE("entropy identity holds within sampling error") {
  for (const auto& name : {"excursions_p", "two_stage_exit_p", "trap_p"}) {
    CAPTURE(name);
    MarkovChain c = chain(name);
    wm::EntropyEstimate est = wm::estimate_conditional_entropy_rate(c, 40, 120, 0, 3);
    CHECK(std::abs(est.identity_mean) < 3.0 * est.identity_stderr + 1e-12);
    CHECK(est.x_rate_exact ==
          doctest::Approx(wm::path_entropy_exact(c, 40, 0) / 40.0).epsilon(1e-12));
    CHECK(est.cross_check ==
          doctest::Approx(est.x_rate_stationary - est.y_rate).epsilon(1e-12));
  }
}

TEST_CASE("entropy estimate marks a missing stationary distribution") {
  MarkovChain c(wm::parse_model(
      "weakmodel v1\ncolors B\nnode a B\nnode b B\nedge a a 1\nedge b b 1\n"));
  wm::EntropyEstimate est = wm::estimate_conditional_entropy_rate(c, 5, 2, 0, 0);
  CHECK(est.bits_per_step == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::isnan(est.x_rate_stationary));
  CHECK(std::isnan(est.cross_check));
}

TEST_CASE("accuracy csv golden") {
  AccuracyCurve curve;
  curve.beta = {0, 1, 2};
  curve.alpha = {1.0, 0.5, 0.25};
  curve.n = {100, 100, 100};
  const std::string path = "/tmp/wm_test_accuracy.csv";
  wm::write_accuracy_csv(curve, path);
  CHECK(read_file(path) == "beta,alpha,n\n0,1,100\n1,0.5,100\n2,0.25,100\n");
  std::remove(path.c_str());
  CHECK_THROWS_WITH(wm::write_accuracy_csv(curve, "/nonexistent_dir_wm/x.csv"),
                    "cannot open /nonexistent_dir_wm/x.csv for writing");
}

TEST_CASE("entropy csv golden") {
  wm::EntropyEstimate est{};
  est.T = 100;
  est.n_samples = 5;
  est.bits_per_step = 0.5;
  est.stderr_ = 0.125;
  const std::string path = "/tmp/wm_test_entropy.csv";
  wm::write_entropy_csv(est, path);
  CHECK(read_file(path) == "T,n_samples,bits_per_step,stderr\n100,5,0.5,0.125\n");
  std::remove(path.c_str());
  CHECK_THROWS_WITH(wm::write_entropy_csv(est, "/nonexistent_dir_wm/x.csv"),
                    "cannot open /nonexistent_dir_wm/x.csv for writing");
}

}  // TEST_SUITE
