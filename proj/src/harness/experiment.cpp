#include "wz/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "wz/harness/pool.hpp"
#include "wz/stochastic/ou_checks.hpp"
#include "wz/systems/initial_conditions.hpp"
#include "wz/torus/norms.hpp"

namespace wz {
namespace {

double velocity_gap(const SystemState& a, const SystemState& b) { return lp_norm(a.velocity - b.velocity, Norm::L1); }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite ") + what);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

double SystemGap::weak_max() const {
  double m = 0.0;
  for (const auto& row : weak_gaps)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

ExperimentSetup prepare_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Grid grid(cfg.n);
  NoiseBasis basis = NoiseBasis::build(cfg.k_max, cfg.decay, cfg.amplitude, grid);
  CorrectorField corr = corrector(basis);
  ScalarField xi0 = initial_vorticity(parse_initial_condition(cfg.initial_condition), grid, cfg.ic_seed);
  std::vector<TestFunction> functions;
  for (const auto& name : cfg.test_functions) functions.push_back(parse_test_function(name));
  std::vector<long> checkpoints;
  const long steps = cfg.steps();
  for (int c = 1; c <= cfg.checkpoints; ++c) checkpoints.push_back(steps * c / cfg.checkpoints);
  return {cfg, std::move(basis), std::move(corr), std::move(xi0), std::move(functions), std::move(checkpoints)};
}

std::uint64_t replica_stream_key(const ExperimentConfig& cfg, std::size_t eps_index, int replica) {
  const auto r = static_cast<std::uint64_t>(replica);
  if (cfg.matched_seeds) return r;
  return (static_cast<std::uint64_t>(eps_index + 1) << 32) | r;
}

ConvergenceRecord run_replica(const ExperimentSetup& setup, std::size_t eps_index, int replica,
                              CheckpointObserver* observer) {
  const ExperimentConfig& cfg = setup.config;
  ConvergenceRecord rec;
  rec.epsilon = cfg.eps.at(eps_index);
  rec.replica = replica;
  const auto started = std::chrono::steady_clock::now();
  try {
    const double eps = rec.epsilon;
    const bool with_se = cfg.system != SystemSelector::Full;
    const bool with_e = cfg.system != SystemSelector::Simplified;
    const NoiseBasis& basis = setup.basis;

    NoiseDriver driver(basis.channel_count(), eps, cfg.time_step(), cfg.seed,
                       replica_stream_key(cfg, eps_index, replica));
    SystemState limit = init_state(SystemKind::Limit, setup.initial, cfg.m);
    std::optional<SystemState> se, e;
    const std::size_t nf = setup.functions.size();
    if (with_se) {
      se = init_state(SystemKind::Simplified, setup.initial, cfg.m);
      rec.simplified = SystemGap{};
    }
    if (with_e) {
      e = init_state(SystemKind::Full, setup.initial, cfg.m);
      attach_small_scales(*e, basis, driver.eta(), eps, SmallScaleStart::Stationary, cfg.advect_small_scales);
      rec.full = SystemGap{};
    }

    double zeta_sup = 0.0, grad_sup = 0.0;
    auto track = [&](const SystemState& s, SystemGap& gap) {
      gap.flow_sup = std::max(gap.flow_sup, l1_flow_distance(s.flow, limit.flow));
      gap.velocity_sup = std::max(gap.velocity_sup, velocity_gap(s, limit));
    };
    if (se) track(*se, *rec.simplified);
    if (e) {
      track(*e, *rec.full);
      grad_sup = zeta_diagnostic(*e).theta_gradient_sup;
    }

    std::size_t next_checkpoint = 0;
    std::vector<double> limit_pairing(nf);
    const long steps = cfg.steps();
    for (long step = 1; step <= steps; ++step) {
      driver.step();
      const NoiseIncrement inc = driver.increment();
      step_limit_system(limit, basis, setup.corrector, inc);
      if (se) {
        step_sE(*se, basis, inc);
        track(*se, *rec.simplified);
      }
      if (e) {
        step_E(*e, basis, inc);
        track(*e, *rec.full);
      }
      if (next_checkpoint < setup.checkpoint_steps.size() && step == setup.checkpoint_steps[next_checkpoint]) {
        for (std::size_t f = 0; f < nf; ++f) limit_pairing[f] = particle_pairing(limit, setup.functions[f]);
        auto weak = [&](const SystemState& s, SystemGap& gap) {
          std::vector<double> row(nf);
          for (std::size_t f = 0; f < nf; ++f) row[f] = particle_pairing(s, setup.functions[f]) - limit_pairing[f];
          gap.weak_gaps.push_back(std::move(row));
        };
        if (se) weak(*se, *rec.simplified);
        if (e) {
          weak(*e, *rec.full);
          const ZetaReport z = zeta_diagnostic(*e);
          zeta_sup = std::max(zeta_sup, z.l1);
          grad_sup = std::max(grad_sup, z.theta_gradient_sup);
        }
        if (observer) observer->checkpoint(step, limit.time(), limit, se ? &*se : nullptr, e ? &*e : nullptr);
        ++next_checkpoint;
      }
    }
    if (e) rec.zeta_ratio = grad_sup > 0.0 ? zeta_sup / (eps * eps * grad_sup) : 0.0;

    for (const auto* gap : {rec.simplified ? &*rec.simplified : nullptr, rec.full ? &*rec.full : nullptr}) {
      if (!gap) continue;
      require_finite(gap->flow_sup, "flow distance");
      require_finite(gap->velocity_sup, "velocity distance");
      require_finite(gap->weak_max(), "weak gap");
    }
    require_finite(rec.zeta_ratio, "zeta ratio");
  } catch (const std::exception& ex) {
    rec.failed = true;
    rec.error = ex.what();
    rec.simplified.reset();
    rec.full.reset();
    rec.zeta_ratio = 0.0;
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

ConvergenceRecord run_replica(const ExperimentConfig& cfg, double epsilon, int replica) {
  ExperimentConfig single = cfg;
  const auto it = std::find(cfg.eps.begin(), cfg.eps.end(), epsilon);
  // Keep the stream key of epsilon's position in the sweep.
  std::size_t index = it == cfg.eps.end() ? 0 : static_cast<std::size_t>(it - cfg.eps.begin());
  if (it == cfg.eps.end()) single.eps = {epsilon};
  return run_replica(prepare_experiment(single), index, replica);
}

std::vector<std::string> metric_names(SystemSelector s) {
  std::vector<std::string> names;
  if (s != SystemSelector::Full) names.insert(names.end(), {"flow_se", "vel_se", "weak_se"});
  if (s != SystemSelector::Simplified) names.insert(names.end(), {"flow_e", "vel_e", "weak_e", "zeta_ratio_e"});
  return names;
}

std::optional<double> metric_value(const ConvergenceRecord& r, const std::string& metric) {
  if (r.failed) return std::nullopt;
  const bool se = metric.size() > 3 && metric.compare(metric.size() - 3, 3, "_se") == 0;
  const std::optional<SystemGap>& gap = se ? r.simplified : r.full;
  if (!gap) return std::nullopt;
  if (metric == "zeta_ratio_e") return r.zeta_ratio;
  const std::string base = metric.substr(0, metric.rfind('_'));
  if (base == "flow") return gap->flow_sup;
  if (base == "vel") return gap->velocity_sup;
  if (base == "weak") return gap->weak_max();
  throw std::invalid_argument("unknown metric " + metric);
}

TrendReport trend_report(const std::string& metric, std::vector<MetricSummary> rows) {
  TrendReport t;
  t.metric = metric;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.epsilon > b.epsilon; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rise = rows[i].mean - rows[i - 1].mean;
    if (rise > 0.0) {
      ++t.inversions;
      if (rise > std::max(rows[i].std_error, rows[i - 1].std_error)) ++t.large_inversions;
    }
  }
  t.monotone = t.inversions <= 1 && t.large_inversions == 0;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const auto& r : rows) {
    if (!(r.mean > 0.0)) continue;
    const double x = std::log(r.epsilon), y = std::log(r.mean);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  t.slope = count >= 2 && denom > 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  return t;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  const ExperimentSetup setup = prepare_experiment(cfg);
  const int per_eps = cfg.replicas;
  const int total = static_cast<int>(cfg.eps.size()) * per_eps;
  SweepResult out;
  out.records.resize(total);
  parallel_for(total, cfg.workers, [&](int i) {
    out.records[i] = run_replica(setup, static_cast<std::size_t>(i / per_eps), i % per_eps);
  });

  const auto names = metric_names(cfg.system);
  std::vector<std::vector<MetricSummary>> by_metric(names.size());
  for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
    const auto first = out.records.begin() + static_cast<long>(e) * per_eps;
    for (auto it = first; it != first + per_eps; ++it) out.failures += it->failed ? 1 : 0;
    for (std::size_t k = 0; k < names.size(); ++k) {
      std::vector<double> values;
      for (auto it = first; it != first + per_eps; ++it)
        if (auto v = metric_value(*it, names[k])) values.push_back(*v);
      const Estimate est = estimate(values);
      MetricSummary row{cfg.eps[e], names[k], est.mean, est.std_error, static_cast<int>(values.size())};
      out.summary.push_back(row);
      by_metric[k].push_back(row);
    }
  }
  for (std::size_t k = 0; k < names.size(); ++k) out.trends.push_back(trend_report(names[k], by_metric[k]));
  return out;
}

std::string sweep_csv_header() { return "eps,metric,mean,stderr,n_replicas"; }

void write_sweep(const ExperimentConfig& cfg, const SweepResult& result) {
  std::filesystem::create_directories(cfg.out);
  auto open = [&](const char* name) {
    std::ofstream os(cfg.out / name);
    if (!os) throw std::runtime_error("cannot write " + (cfg.out / name).string());
    return os;
  };
  {
    auto os = open("sweep.csv");
    os << sweep_csv_header() << "\n";
    for (const auto& r : result.summary)
      os << format_double(r.epsilon) << "," << r.metric << "," << format_double(r.mean) << ","
         << format_double(r.std_error) << "," << r.n_replicas << "\n";
  }
  {
    auto os = open("trend.txt");
    for (const auto& t : result.trends)
      os << "metric=" << t.metric << " monotone=" << (t.monotone ? "yes" : "no") << " inversions=" << t.inversions
         << " large_inversions=" << t.large_inversions << " slope=" << format_double(t.slope) << "\n";
    os << "failures=" << result.failures << "\n";
    for (const auto& r : result.records)
      if (r.failed) os << "failed eps=" << format_double(r.epsilon) << " replica=" << r.replica << " error=" << r.error
                       << "\n";
  }
  {
    auto os = open("timing.csv");
    os << "eps,replica,wall_seconds\n";
    for (const auto& r : result.records)
      os << format_double(r.epsilon) << "," << r.replica << "," << format_double(r.wall_seconds) << "\n";
  }
  if (cfg.per_replica_rows) {
    auto os = open("sweep_replicas.csv");
    os << "eps,replica,metric,value,failed\n";
    const auto names = metric_names(cfg.system);
    for (const auto& r : result.records)
      for (const auto& name : names) {
        const auto v = metric_value(r, name);
        os << format_double(r.epsilon) << "," << r.replica << "," << name << ","
           << (v ? format_double(*v) : std::string("nan")) << "," << (r.failed ? 1 : 0) << "\n";
      }
  }
  std::ofstream(cfg.out / "config.txt") << dump_config(cfg);
}

}  // namespace wz
