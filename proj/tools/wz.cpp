#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "wz/harness/diagnostics.hpp"
#include "wz/harness/experiment.hpp"
#include "wz/systems/snapshot.hpp"

namespace {

struct SnapshotWriter : wz::CheckpointObserver {
  std::filesystem::path dir;

  std::ofstream separation;

  explicit SnapshotWriter(std::filesystem::path d) : dir(std::move(d)) {
    std::filesystem::create_directories(dir);
    separation.open(dir / "separation.csv");
    separation << "time,system,min_ratio,max_ratio\n";
  }

  void record(double time, const char* system, const wz::SystemState& s) {
    const wz::LabelSeparation sep = wz::label_separation(s.flow);
    separation << time << "," << system << "," << sep.min_ratio << "," << sep.max_ratio << "\n";
  }

  void checkpoint(long step, double time, const wz::SystemState& limit, const wz::SystemState* simplified,
                  const wz::SystemState* full) override {
    wz::write_snapshot(dir, "xi_limit", step, time, limit.vorticity);
    record(time, "limit", limit);
    if (simplified) {
      wz::write_snapshot(dir, "xi_se", step, time, simplified->vorticity);
      record(time, "se", *simplified);
    }
    if (full) {
      record(time, "e", *full);
      wz::write_snapshot(dir, "xi_large_e", step, time, full->vorticity);
      wz::write_snapshot(dir, "xi_small_e", step, time, full->small->xi);
      wz::write_snapshot(dir, "zeta_e", step, time, wz::zeta_diagnostic(*full).zeta);
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport-noise Wong-Zakai experiments on the 2D torus"};
  app.require_subcommand(1);

  std::string config_path, eps_list, system;
  std::uint64_t seed = 0;
  std::string out;
  int replicas = 0;
  int replica = 0;
  std::vector<std::string> overrides;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--eps", eps_list, "comma-separated eps list");
    sub->add_option("--system", system, "se, e or both")->check(CLI::IsMember({"se", "e", "both"}));
    sub->add_option("--replicas", replicas, "replicas per eps")->check(CLI::PositiveNumber);
    sub->add_option("--set", overrides, "extra key=value assignments");
  };
  CLI::App* sweep = app.add_subcommand("sweep", "eps sweep against the limit system; writes sweep.csv");
  CLI::App* diagnostics = app.add_subcommand("diagnostics", "closed-form and Monte Carlo checks; writes diagnostics.txt");
  CLI::App* single = app.add_subcommand("single", "one replica with vorticity snapshots at the checkpoints");
  for (auto* sub : {sweep, diagnostics, single}) common(sub);
  single->add_option("--replica", replica, "replica id")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    wz::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = wz::load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got " + kv);
      wz::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed")) cfg.seed = seed;
    if (active->count("--out")) cfg.out = out;
    if (active->count("--eps")) cfg.eps = wz::parse_double_list(eps_list);
    if (active->count("--system")) cfg.system = wz::parse_system_selector(system);
    if (active->count("--replicas")) cfg.replicas = replicas;
    cfg.validate();

    if (*sweep) {
      const wz::SweepResult result = wz::run_sweep(cfg);
      wz::write_sweep(cfg, result);
      for (const auto& t : result.trends)
        std::cout << t.metric << " monotone=" << (t.monotone ? "yes" : "no") << " inversions=" << t.inversions
                  << " slope=" << t.slope << "\n";
      std::cout << "wrote " << (cfg.out / "sweep.csv").string() << " (" << result.failures << " failed replicas)\n";
      return 0;
    }
    if (*diagnostics) {
      const auto results = wz::run_diagnostics(cfg);
      wz::write_diagnostics(cfg.out / "diagnostics.txt", results);
      int failed = 0;
      for (const auto& r : results) {
        std::cout << wz::format_diagnostic(r) << "\n";
        failed += r.pass ? 0 : 1;
      }
      return failed == 0 ? 0 : 1;
    }
    const wz::ExperimentSetup setup = wz::prepare_experiment(cfg);
    SnapshotWriter writer(cfg.out / "snapshots");
    const wz::ConvergenceRecord rec = wz::run_replica(setup, 0, replica, &writer);
    std::filesystem::create_directories(cfg.out);
    std::ofstream csv(cfg.out / "single.csv");
    csv << "eps,replica,metric,value\n";
    for (const auto& name : wz::metric_names(cfg.system))
      if (auto v = wz::metric_value(rec, name)) csv << cfg.eps.front() << "," << replica << "," << name << "," << *v << "\n";
    if (rec.failed) {
      std::cerr << "replica failed: " << rec.error << "\n";
      return 1;
    }
    std::cout << "wrote " << (cfg.out / "single.csv").string() << " and snapshots in "
              << (cfg.out / "snapshots").string() << "\n";
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
