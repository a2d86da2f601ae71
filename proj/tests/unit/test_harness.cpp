#include <doctest.h>

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>

#include "wz/harness/config.hpp"
#include "wz/harness/diagnostics.hpp"
#include "wz/harness/experiment.hpp"
#include "wz/harness/pool.hpp"

using namespace wz;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n = 32;
  cfg.m = 16;
  cfg.eps = {0.4, 0.2};
  cfg.horizon = 0.04;
  cfg.replicas = 2;
  cfg.workers = 1;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("wz_harness_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  ExperimentConfig cfg;
  CHECK(cfg.time_step() == doctest::Approx(1e-3));
  CHECK(cfg.steps() == 500);
  CHECK(cfg.mesh(0.3) == doctest::Approx(std::pow(0.3, 1.75)));
  CHECK_NOTHROW(cfg.validate());

  set_config_value(cfg, "eps", "0.5, 0.25");
  set_config_value(cfg, "system", "se");
  set_config_value(cfg, "test_functions", "sin(2,1);cos(1,1)");
  set_config_value(cfg, "matched_seeds", "false");
  CHECK(cfg.eps == std::vector<double>{0.5, 0.25});
  CHECK(cfg.system == SystemSelector::Simplified);
  CHECK(cfg.test_functions.size() == 2);
  CHECK_FALSE(cfg.matched_seeds);

  CHECK_THROWS_AS(set_config_value(cfg, "epsilon", "0.1"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "n", "sixty"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "seed", "-4"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "system", "sde"), std::invalid_argument);

  SUBCASE("file round trip") {
    const auto dir = scratch("config");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "a.cfg") << "# comment\n\n" << dump_config(cfg);
    const ExperimentConfig back = load_config(dir / "a.cfg");
    CHECK(dump_config(back) == dump_config(cfg));
    std::ofstream(dir / "bad.cfg") << "n 64\n";
    CHECK_THROWS_AS(load_config(dir / "bad.cfg"), std::invalid_argument);
    CHECK_THROWS_AS(load_config(dir / "missing.cfg"), std::runtime_error);
  }
  SUBCASE("constraints") {
    ExperimentConfig c;
    c.rho = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.rho = 2.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ExperimentConfig{};
    c.dt = 2e-3;  // above 0.1^2 / 10
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.amplitude = 0.0;
    CHECK_NOTHROW(c.validate());
    c = ExperimentConfig{};
    c.n = 14;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ExperimentConfig{};
    c.horizon = 0.5005;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
}

TEST_CASE("worker pool") {
  std::vector<int> hits(257, 0);
  parallel_for(257, 4, [&](int i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  std::atomic<int> ran{0};
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [&](int i) {
                                 ++ran;
                                 if (i == 4) throw std::runtime_error("task");
                               }),
                  std::runtime_error);
  CHECK(ran == 10);
  CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("trend report") {
  auto rows = [](std::vector<double> means, double se) {
    std::vector<MetricSummary> out;
    const std::vector<double> eps{0.4, 0.3, 0.2, 0.15, 0.1};
    for (std::size_t i = 0; i < means.size(); ++i) out.push_back({eps[i], "m", means[i], se, 8});
    return out;
  };
  const TrendReport clean = trend_report("m", rows({0.4, 0.3, 0.2, 0.15, 0.1}, 0.01));
  CHECK(clean.monotone);
  CHECK(clean.inversions == 0);
  CHECK(clean.slope == doctest::Approx(1.0));

  const TrendReport small = trend_report("m", rows({0.4, 0.3, 0.305, 0.15, 0.1}, 0.01));
  CHECK(small.monotone);
  CHECK(small.inversions == 1);
  CHECK(small.large_inversions == 0);

  CHECK_FALSE(trend_report("m", rows({0.4, 0.3, 0.35, 0.15, 0.1}, 0.01)).monotone);
  CHECK_FALSE(trend_report("m", rows({0.4, 0.41, 0.2, 0.205, 0.1}, 0.01)).monotone);

  // Row order does not matter.
  auto shuffled = rows({0.4, 0.3, 0.2, 0.15, 0.1}, 0.0);
  std::swap(shuffled[0], shuffled[3]);
  CHECK(trend_report("m", shuffled).monotone);

  CHECK(trend_report("m", rows({0.2}, 0.0)).slope == 0.0);
}

TEST_CASE("replica runner") {
  const ExperimentConfig cfg = small_config();
  const ExperimentSetup setup = prepare_experiment(cfg);
  CHECK(setup.checkpoint_steps.size() == 8);
  CHECK(setup.checkpoint_steps.back() == cfg.steps());

  SUBCASE("amplitude 0 gives identical dynamics") {
    ExperimentConfig quiet = cfg;
    quiet.amplitude = 0.0;
    const ConvergenceRecord r = run_replica(prepare_experiment(quiet), 1, 0);
    REQUIRE_FALSE(r.failed);
    for (const auto& name : metric_names(SystemSelector::Both)) CHECK(*metric_value(r, name) <= 1e-6);
  }
  SUBCASE("same seed twice gives identical rows") {
    const ConvergenceRecord a = run_replica(setup, 0, 1), b = run_replica(setup, 0, 1);
    REQUIRE_FALSE(a.failed);
    for (const auto& name : metric_names(SystemSelector::Both)) CHECK(*metric_value(a, name) == *metric_value(b, name));
    CHECK(a.simplified->weak_gaps == b.simplified->weak_gaps);
    const ConvergenceRecord c = run_replica(setup, 0, 0);
    CHECK(c.simplified->flow_sup != a.simplified->flow_sup);
  }
  SUBCASE("records are complete and nonnegative") {
    const ConvergenceRecord r = run_replica(setup, 0, 0);
    REQUIRE_FALSE(r.failed);
    REQUIRE(r.simplified);
    REQUIRE(r.full);
    CHECK(r.simplified->weak_gaps.size() == 8);
    CHECK(r.simplified->weak_gaps.front().size() == 3);
    for (const auto& name : metric_names(SystemSelector::Both)) {
      const double v = *metric_value(r, name);
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
    }
    CHECK(r.simplified->flow_sup > 0.0);
    CHECK(r.wall_seconds > 0.0);
  }
  SUBCASE("matched seeds share the Brownian path across eps") {
    ExperimentConfig unmatched = cfg;
    unmatched.matched_seeds = false;
    CHECK(replica_stream_key(cfg, 0, 3) == replica_stream_key(cfg, 1, 3));
    CHECK(replica_stream_key(unmatched, 0, 3) != replica_stream_key(unmatched, 1, 3));
    std::set<std::uint64_t> keys;
    for (std::size_t e = 0; e < 5; ++e)
      for (int r = 0; r < 8; ++r) keys.insert(replica_stream_key(unmatched, e, r));
    CHECK(keys.size() == 40);
  }
  SUBCASE("errors become failure records") {
    struct Failing : CheckpointObserver {
      void checkpoint(long, double, const SystemState&, const SystemState*, const SystemState*) override {
        throw std::runtime_error("observer failure");
      }
    } failing;
    const ConvergenceRecord r = run_replica(setup, 0, 0, &failing);
    CHECK(r.failed);
    CHECK(r.error == "observer failure");
    CHECK_FALSE(metric_value(r, "flow_se").has_value());
  }
  SUBCASE("system selector") {
    ExperimentConfig only = cfg;
    only.system = SystemSelector::Simplified;
    const ConvergenceRecord r = run_replica(prepare_experiment(only), 0, 0);
    CHECK(r.simplified);
    CHECK_FALSE(r.full);
    CHECK(metric_names(SystemSelector::Simplified).size() == 3);
    CHECK(metric_names(SystemSelector::Full).size() == 4);
    CHECK_THROWS_AS(metric_value(r, "flux_se"), std::invalid_argument);
  }
}

TEST_CASE("sweep output") {
  ExperimentConfig cfg = small_config();
  cfg.out = scratch("sweep1");
  cfg.per_replica_rows = true;
  const SweepResult a = run_sweep(cfg);
  write_sweep(cfg, a);
  CHECK(a.records.size() == 4);
  CHECK(a.summary.size() == 2 * 7);
  CHECK(a.trends.size() == 7);
  CHECK(a.failures == 0);

  const std::string csv = slurp(cfg.out / "sweep.csv");
  CHECK(csv.rfind(sweep_csv_header() + "\n", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  std::set<std::string> metrics;
  while (std::getline(lines, line)) {
    ++rows;
    std::stringstream fields(line);
    std::string eps, metric, mean, se, count;
    std::getline(fields, eps, ',');
    std::getline(fields, metric, ',');
    std::getline(fields, mean, ',');
    std::getline(fields, se, ',');
    std::getline(fields, count, ',');
    metrics.insert(metric);
    CHECK(std::stod(eps) > 0.0);
    CHECK(std::stod(se) >= 0.0);
    CHECK(count == "2");
  }
  CHECK(rows == 14);
  CHECK(metrics.size() == 7);
  CHECK(std::filesystem::exists(cfg.out / "sweep_replicas.csv"));
  CHECK(std::filesystem::exists(cfg.out / "trend.txt"));

  SUBCASE("bytes do not depend on the worker count") {
    ExperimentConfig threaded = cfg;
    threaded.workers = 3;
    threaded.out = scratch("sweep2");
    write_sweep(threaded, run_sweep(threaded));
    CHECK(slurp(cfg.out / "sweep.csv") == slurp(threaded.out / "sweep.csv"));
    CHECK(slurp(cfg.out / "sweep_replicas.csv") == slurp(threaded.out / "sweep_replicas.csv"));
  }
  SUBCASE("a single eps gives one group") {
    ExperimentConfig one = cfg;
    one.eps = {0.3};
    one.per_replica_rows = false;
    const SweepResult r = run_sweep(one);
    CHECK(r.summary.size() == 7);
    for (const auto& row : r.summary) CHECK(row.epsilon == 0.3);
  }
}

TEST_CASE("diagnostics report") {
  DiagnosticResult r{"probe", true, 0.5, 1.0, ""};
  CHECK(format_diagnostic(r) == "probe PASS measured=0.5 bound=1");
  r.pass = false;
  r.note = "trivial-zero";
  CHECK(format_diagnostic(r) == "probe FAIL measured=0.5 bound=1 note=trivial-zero");

  ExperimentConfig cfg = small_config();
  cfg.diagnostic_scale = 0.05;
  cfg.eps = {0.2};
  cfg.horizon = 0.02;

  SUBCASE("amplitude 0 reports trivial zeros") {
    cfg.amplitude = 0.0;
    const auto results = run_diagnostics(cfg);
    std::set<std::string> trivial;
    for (const auto& d : results)
      if (d.note == "trivial-zero") trivial.insert(d.name);
    CHECK(trivial.count("corrector_vanishes") == 1);
    CHECK(trivial.count("iterated_integral_same") == 1);
    CHECK(trivial.count("iterated_integral_cross") == 1);
    for (const auto& d : results)
      if (d.name == "deterministic_reduction") CHECK(d.pass);
  }
  SUBCASE("tightened tolerance makes the Monte Carlo checks fail") {
    cfg.tolerance_scale = 0.01;
    const auto results = run_diagnostics(cfg);
    int failed_mc = 0;
    for (const auto& d : results)
      if (d.name.rfind("ou_", 0) == 0 || d.name.rfind("iterated_integral", 0) == 0) failed_mc += d.pass ? 0 : 1;
    CHECK(failed_mc >= 3);
    const auto file = scratch("diag") / "diagnostics.txt";
    write_diagnostics(file, results);
    CHECK(slurp(file).find(" FAIL measured=") != std::string::npos);
  }
}
