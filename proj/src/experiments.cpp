#include "mellinstop/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "mellinstop/kernels/phase_sum.hpp"
#include "mellinstop/minimax.hpp"
#include "mellinstop/rng.hpp"
#include "mellinstop/stats.hpp"

namespace mellinstop {

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "loss_boxplot") return ExperimentKind::LossBoxplot;
  if (name == "rate_slope") return ExperimentKind::RateSlope;
  if (name == "normality") return ExperimentKind::Normality;
  if (name == "minimax_decay") return ExperimentKind::MinimaxDecay;
  if (name == "oracle_roundtrip") return ExperimentKind::OracleRoundtrip;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::LossBoxplot:
      return "loss_boxplot";
    case ExperimentKind::RateSlope:
      return "rate_slope";
    case ExperimentKind::Normality:
      return "normality";
    case ExperimentKind::MinimaxDecay:
      return "minimax_decay";
    default:
      return "oracle_roundtrip";
  }
}

std::vector<double> XGrid::values() const {
  if (points < 1 || !(lo > 0.0) || (points == 1 ? !(hi >= lo) : !(hi > lo)))
    throw std::invalid_argument("x_grid: need 0 < lo <= hi and points >= 1");
  std::vector<double> xs(points);
  if (points == 1) {
    xs[0] = lo;
    return xs;
  }
  for (int i = 0; i < points; ++i)
    xs[i] = lo + (hi - lo) * static_cast<double>(i) /
                     static_cast<double>(points - 1);
  return xs;
}

ProcessModel ExperimentSpec::make_process() const {
  if (process == "bessel") return ProcessModel::bessel(d);
  if (process == "gaussian_ss") return ProcessModel::gaussian_ss(H);
  if (process == "gamma_ss") return ProcessModel::gamma_ss(H, sigma_shape);
  throw std::invalid_argument("unknown process '" + process + "'");
}

StoppingTimeModel ExperimentSpec::make_t_model() const {
  return make_stopping_time(t_family, t_params);
}

EstimatorConfig ExperimentSpec::make_config(long n) const {
  EstimatorConfig cfg{make_process(), gamma_line, CutoffRule{}, beta_angle,
                      n};
  if (rule == "auto") {
    cfg.rule = auto_rule(cfg.process, gamma_line);
  } else if (rule == "bessel") {
    cfg.rule = CutoffRule{CutoffVariant::BesselRule, 0.0};
  } else if (rule == "gaussian") {
    cfg.rule = CutoffRule{gamma_line >= 1.0
                              ? CutoffVariant::GaussianRuleHiGamma
                              : CutoffVariant::GaussianRuleLoGamma,
                          0.0};
  } else if (rule == "gamma") {
    cfg.rule = auto_rule(ProcessModel::gamma_ss(H, sigma_shape), gamma_line);
  } else if (rule == "manual") {
    cfg.rule = CutoffRule::manual(manual_cutoff);
  } else {
    throw std::invalid_argument("unknown cutoff rule '" + rule + "'");
  }
  return cfg;
}

void ExperimentSpec::validate() const {
  if (n_list.empty())
    throw std::invalid_argument("spec: n_list must be nonempty");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("spec: n_list must be strictly ascending");
  if (replicates < 1)
    throw std::invalid_argument("spec: replicates must be >= 1");
  x_grid.values();  // validates
  (void)kernels::kind_from_string(kernel);
}

ExperimentSpec default_spec(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.experiment = kind;
  switch (kind) {
    case ExperimentKind::LossBoxplot:
      break;  // the baseline configuration is exactly this experiment
    case ExperimentKind::RateSlope:
      spec.beta_angle = kPi / 2.0 - 0.05;
      spec.n_list = {1000, 10000, 100000};
      spec.replicates = 50;
      break;
    case ExperimentKind::Normality:
      spec.n_list = {100, 10000};
      spec.replicates = 200;
      break;
    case ExperimentKind::MinimaxDecay:
      spec.process = "bessel";
      spec.d = 1.0;
      spec.beta_angle = kPi / 2.0;
      spec.n_list = {2};  // unused, kept valid
      spec.replicates = 1;
      break;
    case ExperimentKind::OracleRoundtrip:
      spec.x_grid = XGrid{0.05, 10.0, 50};
      spec.gamma_line = 1.5;
      spec.manual_cutoff = 60.0;
      spec.rule = "manual";
      spec.n_list = {2};
      spec.replicates = 1;
      break;
  }
  return spec;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::size_t pool = threads > 0 ? static_cast<std::size_t>(threads) : hw;
  pool = std::min(pool, count);
  if (pool <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  workers.reserve(pool);
  for (std::size_t t = 0; t < pool; ++t) {
    workers.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

namespace {

std::string seed_hex(std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(seed));
  return std::string(buf);
}

SampleBatch draw_batch(const ProcessModel& process,
                       const StoppingTimeModel& t_model, long n,
                       std::uint64_t rep_seed) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double t =
        t_model.sample(derive_seed(rep_seed, {0, static_cast<std::uint64_t>(i)}));
    xs[static_cast<std::size_t>(i)] = process.sample_stopped(
        t, derive_seed(rep_seed, {1, static_cast<std::uint64_t>(i)}));
  }
  return SampleBatch::from_values(std::move(xs), rep_seed);
}

void add_quantile_summary(ExperimentReport& report, const std::string& prefix,
                          const std::vector<double>& values) {
  if (values.empty()) return;
  report.summary.emplace_back(prefix + "_min", stats::quantile(values, 0.0));
  report.summary.emplace_back(prefix + "_q25", stats::quantile(values, 0.25));
  report.summary.emplace_back(prefix + "_median",
                              stats::quantile(values, 0.5));
  report.summary.emplace_back(prefix + "_q75", stats::quantile(values, 0.75));
  report.summary.emplace_back(prefix + "_max", stats::quantile(values, 1.0));
}

struct ReplicateTask {
  long n;
  int replicate;
  std::uint64_t seed;
};

std::vector<ReplicateTask> make_tasks(const ExperimentSpec& spec) {
  std::vector<ReplicateTask> tasks;
  tasks.reserve(spec.n_list.size() * static_cast<std::size_t>(spec.replicates));
  for (long n : spec.n_list)
    for (int k = 0; k < spec.replicates; ++k)
      tasks.push_back(
          {n, k,
           derive_seed(spec.base_seed,
                       {static_cast<std::uint64_t>(spec.experiment),
                        static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(k)})});
  return tasks;
}

}  // namespace

ExperimentReport run_loss_boxplot(const ExperimentSpec& spec) {
  spec.validate();
  kernels::set_kernel(kernels::kind_from_string(spec.kernel));
  const ProcessModel process = spec.make_process();
  const StoppingTimeModel t_model = spec.make_t_model();
  spec.make_config(spec.n_list.front()).validate();  // fail before simulating
  const std::vector<double> xs = spec.x_grid.values();

  ExperimentReport report;
  report.spec = spec;
  report.columns = {"experiment", "n", "replicate", "seed", "sup_loss",
                    "status"};

  const std::vector<ReplicateTask> tasks = make_tasks(spec);
  report.rows.resize(tasks.size());
  parallel_for(tasks.size(), spec.threads, [&](std::size_t i) {
    const ReplicateTask& task = tasks[i];
    std::vector<Value> row{std::string(experiment_name(spec.experiment)),
                           static_cast<std::int64_t>(task.n),
                           static_cast<std::int64_t>(task.replicate),
                           seed_hex(task.seed), 0.0, std::string("ok")};
    try {
      const SampleBatch batch = draw_batch(process, t_model, task.n, task.seed);
      const DensityEstimate est(spec.make_config(task.n), batch);
      double sup = 0.0;
      for (double x : xs)
        sup = std::max(sup, std::abs(est(x) - t_model.density(x)));
      row[4] = sup;
    } catch (const std::exception& e) {
      row[4] = std::nan("");
      row[5] = std::string("error: ") + e.what();
    }
    report.rows[i] = std::move(row);
  });

  for (long n : spec.n_list) {
    std::vector<double> losses;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].n == n && std::get<std::string>(report.rows[i][5]) == "ok")
        losses.push_back(std::get<double>(report.rows[i][4]));
    add_quantile_summary(report, "sup_loss_n" + std::to_string(n), losses);
  }
  return report;
}

ExperimentReport run_rate_slope(const ExperimentSpec& spec) {
  spec.validate();
  kernels::set_kernel(kernels::kind_from_string(spec.kernel));
  const ProcessModel process = spec.make_process();
  const StoppingTimeModel t_model = spec.make_t_model();
  spec.make_config(spec.n_list.front()).validate();
  const double f_true = t_model.density(spec.x_eval);

  ExperimentReport report;
  report.spec = spec;
  report.columns = {"experiment", "n",    "replicate", "seed",
                    "fhat",       "abs_err", "status"};

  const std::vector<ReplicateTask> tasks = make_tasks(spec);
  report.rows.resize(tasks.size());
  parallel_for(tasks.size(), spec.threads, [&](std::size_t i) {
    const ReplicateTask& task = tasks[i];
    std::vector<Value> row{std::string(experiment_name(spec.experiment)),
                           static_cast<std::int64_t>(task.n),
                           static_cast<std::int64_t>(task.replicate),
                           seed_hex(task.seed), 0.0, 0.0, std::string("ok")};
    try {
      const SampleBatch batch = draw_batch(process, t_model, task.n, task.seed);
      const double fhat =
          DensityEstimate(spec.make_config(task.n), batch)(spec.x_eval);
      row[4] = fhat;
      row[5] = std::abs(fhat - f_true);
    } catch (const std::exception& e) {
      row[4] = std::nan("");
      row[5] = std::nan("");
      row[6] = std::string("error: ") + e.what();
    }
    report.rows[i] = std::move(row);
  });

  // ln RMSE per n with a delta-method sd, then the measured-error OLS slope.
  std::vector<double> ln_n, ln_rmse, ln_rmse_sd;
  for (long n : spec.n_list) {
    std::vector<double> sq;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].n == n && std::get<std::string>(report.rows[i][6]) == "ok") {
        const double e = std::get<double>(report.rows[i][5]);
        sq.push_back(e * e);
      }
    if (sq.size() < 2) continue;
    const double mse = stats::mean(sq);
    const double sd_mse =
        stats::sample_sd(sq) / std::sqrt(static_cast<double>(sq.size()));
    ln_n.push_back(std::log(static_cast<double>(n)));
    ln_rmse.push_back(0.5 * std::log(mse));
    ln_rmse_sd.push_back(0.5 * sd_mse / mse);
    report.summary.emplace_back("rmse_n" + std::to_string(n), std::sqrt(mse));
  }
  const stats::SlopeFit fit = stats::ols_slope(ln_n, ln_rmse, ln_rmse_sd);
  report.summary.emplace_back("slope", fit.slope);
  report.summary.emplace_back("slope_half_width", fit.half_width);

  double theory;
  switch (process.family()) {
    case ProcessFamily::Bessel:
      theory = spec.beta_angle / (kPi + 2.0 * spec.beta_angle);
      break;
    case ProcessFamily::GaussianSS:
      theory = 2.0 * process.H() * spec.beta_angle /
               (kPi + 4.0 * process.H() * spec.beta_angle);
      break;
    default:
      theory = spec.beta_angle / (kPi / process.H() + 2.0 * spec.beta_angle);
      break;
  }
  report.summary.emplace_back("theory_slope", -theory);
  return report;
}

ExperimentReport run_normality(const ExperimentSpec& spec) {
  spec.validate();
  kernels::set_kernel(kernels::kind_from_string(spec.kernel));
  if (spec.replicates < 2)
    throw std::invalid_argument(
        "normality: replicates must be >= 2 to standardize");
  const ProcessModel process = spec.make_process();
  if (process.family() != ProcessFamily::Bessel)
    throw std::invalid_argument("normality: requires the bessel process");
  const StoppingTimeModel t_model = spec.make_t_model();

  ExperimentReport report;
  report.spec = spec;
  report.columns = {"experiment", "n", "replicate", "seed", "fhat", "status"};

  // Hypothesis feasibility (and nu_n) per n, before any simulation.
  for (long n : spec.n_list) {
    const NormalityQuantities nq =
        normality_quantities(spec.make_config(n), t_model, spec.x_eval);
    report.summary.emplace_back("nu_n_theory_n" + std::to_string(n), nq.nu_n);
    if (n == spec.n_list.front())
      report.summary.emplace_back("c_const", nq.c_const);
  }

  const std::vector<ReplicateTask> tasks = make_tasks(spec);
  report.rows.resize(tasks.size());
  parallel_for(tasks.size(), spec.threads, [&](std::size_t i) {
    const ReplicateTask& task = tasks[i];
    std::vector<Value> row{std::string(experiment_name(spec.experiment)),
                           static_cast<std::int64_t>(task.n),
                           static_cast<std::int64_t>(task.replicate),
                           seed_hex(task.seed), 0.0, std::string("ok")};
    try {
      const SampleBatch batch = draw_batch(process, t_model, task.n, task.seed);
      row[4] = DensityEstimate(spec.make_config(task.n), batch)(spec.x_eval);
    } catch (const std::exception& e) {
      row[4] = std::nan("");
      row[5] = std::string("error: ") + e.what();
    }
    report.rows[i] = std::move(row);
  });

  for (long n : spec.n_list) {
    std::vector<double> fhat;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].n == n && std::get<std::string>(report.rows[i][5]) == "ok")
        fhat.push_back(std::get<double>(report.rows[i][4]));
    if (fhat.size() < 2) continue;
    const double m = stats::mean(fhat);
    const double sd = stats::sample_sd(fhat);
    std::vector<double> z(fhat.size());
    for (std::size_t i = 0; i < fhat.size(); ++i) z[i] = (fhat[i] - m) / sd;
    const std::string tag = "_n" + std::to_string(n);
    report.summary.emplace_back("mean" + tag, m);
    report.summary.emplace_back("sd" + tag, sd);
    report.summary.emplace_back("empirical_var_scaled" + tag,
                                sd * sd * static_cast<double>(n));
    report.summary.emplace_back("ks" + tag, stats::ks_vs_standard_normal(z));
  }
  return report;
}

ExperimentReport run_minimax_decay(const ExperimentSpec& spec) {
  spec.validate();
  if (!(spec.beta_angle > 0.0 && spec.beta_angle < kPi))
    throw std::invalid_argument(
        "minimax_decay: beta_angle must lie in (0, pi)");
  if (spec.m_grid.empty())
    throw std::invalid_argument("minimax_decay: m_grid must be nonempty");
  const ProcessModel process = spec.make_process();

  ExperimentReport report;
  report.spec = spec;
  report.columns = {"experiment", "M",    "delta", "sup_distance",
                    "argmax_x",   "chi2", "n_critical"};

  // One delta across the whole grid: the smallest validated one (the pair's
  // own search), unless the spec pins a value.
  double delta;
  if (spec.minimax_delta >= 0.0) {
    delta = spec.minimax_delta;
  } else {
    delta = 0.5;
    for (double M : spec.m_grid)
      delta = std::min(delta, AdversarialPair::make(spec.beta_angle, M).delta());
  }

  report.rows.resize(spec.m_grid.size());
  parallel_for(spec.m_grid.size(), spec.threads, [&](std::size_t i) {
    const double M = spec.m_grid[i];
    const AdversarialPair pair =
        AdversarialPair::make_with_delta(spec.beta_angle, M, delta);
    const auto [sup, argmax] = pair.sup_distance();
    const double chi2 = chi2_divergence(pair, process, 0.0);
    const double n_crit =
        chi2 > 0.0 ? std::floor(1.0 / std::log1p(chi2)) : INFINITY;
    report.rows[i] = {std::string(experiment_name(spec.experiment)),
                      M,
                      delta,
                      sup,
                      argmax,
                      chi2,
                      n_crit};
  });

  std::vector<double> ms, ln_chi2, scaled_sup;
  for (std::size_t i = 0; i < spec.m_grid.size(); ++i) {
    const double chi2 = std::get<double>(report.rows[i][5]);
    const double sup = std::get<double>(report.rows[i][3]);
    scaled_sup.push_back(sup * std::exp(spec.m_grid[i] * spec.beta_angle));
    if (chi2 > 0.0) {
      ms.push_back(spec.m_grid[i]);
      ln_chi2.push_back(std::log(chi2));
    }
  }
  if (ms.size() >= 2) {
    const stats::SlopeFit fit = stats::ols_slope(ms, ln_chi2);
    report.summary.emplace_back("ln_chi2_slope", fit.slope);
    report.summary.emplace_back("ln_chi2_slope_half_width", fit.half_width);
  }
  report.summary.emplace_back(
      "theory_chi2_rate", -(kPi + 2.0 * spec.beta_angle));
  report.summary.emplace_back(
      "sup_distance_scaled_min",
      *std::min_element(scaled_sup.begin(), scaled_sup.end()));
  report.summary.emplace_back("delta", delta);
  return report;
}

ExperimentReport run_oracle_roundtrip(const ExperimentSpec& spec) {
  spec.validate();
  const double cutoff = spec.manual_cutoff > 0.0 ? spec.manual_cutoff : 60.0;
  const double gamma_line = spec.gamma_line;

  struct Family {
    const char* label;
    StoppingTimeModel model;
  };
  const std::vector<Family> families = {
      {"gamma(2,1)", StoppingTimeModel::gamma(2.0, 1.0)},
      {"weibull(2,1)", StoppingTimeModel::weibull(2.0, 1.0)},
      {"lognormal(0,1)", StoppingTimeModel::lognormal(0.0, 1.0)}};

  ExperimentReport report;
  report.spec = spec;
  report.columns = {"experiment", "family", "x", "f_true", "f_inverted",
                    "abs_err"};

  const std::vector<double> xs = spec.x_grid.values();
  for (const Family& fam : families) {
    const MellinFunction mf = fam.model.mellin_function();
    double worst = 0.0;
    for (double x : xs) {
      const double inv = mellin_invert(mf, gamma_line, x, cutoff);
      const double truth = fam.model.density(x);
      const double err = std::abs(inv - truth);
      worst = std::max(worst, err);
      report.rows.push_back({std::string(experiment_name(spec.experiment)),
                             std::string(fam.label), x, truth, inv, err});
    }
    report.summary.emplace_back(std::string("max_abs_err_") + fam.label,
                                worst);
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  switch (spec.experiment) {
    case ExperimentKind::LossBoxplot:
      return run_loss_boxplot(spec);
    case ExperimentKind::RateSlope:
      return run_rate_slope(spec);
    case ExperimentKind::Normality:
      return run_normality(spec);
    case ExperimentKind::MinimaxDecay:
      return run_minimax_decay(spec);
    default:
      return run_oracle_roundtrip(spec);
  }
}

double summary_value(const ExperimentReport& report, const std::string& key) {
  for (const auto& [k, v] : report.summary)
    if (k == key) return v;
  throw std::invalid_argument("summary key '" + key + "' not found");
}

}  // namespace mellinstop
