#include <doctest.h>

#include <cmath>

#include "mellinstop/report.hpp"
#include "mellinstop/stats.hpp"

using namespace mellinstop;

namespace {

ExperimentSpec tiny_loss_spec() {
  ExperimentSpec spec = default_spec(ExperimentKind::LossBoxplot);
  spec.n_list = {50, 100};
  spec.replicates = 6;
  spec.x_grid = XGrid{0.5, 2.0, 9};
  spec.base_seed = 404;
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("loss experiment: smoke run with a single point") {
  ExperimentSpec spec = default_spec(ExperimentKind::LossBoxplot);
  spec.n_list = {10};
  spec.replicates = 1;
  spec.x_grid = XGrid{1.0, 1.0, 1};
  const ExperimentReport report = run_loss_boxplot(spec);
  REQUIRE(report.rows.size() == 1);
  CHECK(std::get<std::string>(report.rows[0][5]) == "ok");
  CHECK(std::isfinite(std::get<double>(report.rows[0][4])));
}

TEST_CASE("reports are byte-deterministic and thread-count invariant") {
  ExperimentSpec spec = tiny_loss_spec();
  spec.threads = 1;
  const std::string csv1 = to_csv(run_loss_boxplot(spec));
  const std::string csv1again = to_csv(run_loss_boxplot(spec));
  CHECK(csv1 == csv1again);
  spec.threads = 2;
  CHECK(to_csv(run_loss_boxplot(spec)) == csv1);

  // a different seed changes the records
  spec.base_seed = 405;
  CHECK(to_csv(run_loss_boxplot(spec)) != csv1);
}

TEST_CASE("record count is n_list x replicates, failures included") {
  const ExperimentReport report = run_loss_boxplot(tiny_loss_spec());
  CHECK(report.rows.size() == 2u * 6u);
}

TEST_CASE("summary quantiles equal recomputation from the records") {
  const ExperimentReport report = run_loss_boxplot(tiny_loss_spec());
  for (long n : report.spec.n_list) {
    std::vector<double> losses;
    for (const auto& row : report.rows)
      if (std::get<std::int64_t>(row[1]) == n &&
          std::get<std::string>(row[5]) == "ok")
        losses.push_back(std::get<double>(row[4]));
    CHECK(summary_value(report, "sup_loss_n" + std::to_string(n) + "_median") ==
          stats::quantile(losses, 0.5));
    CHECK(summary_value(report, "sup_loss_n" + std::to_string(n) + "_max") ==
          stats::quantile(losses, 1.0));
  }
}

TEST_CASE("csv shape and determinism of emission") {
  const ExperimentReport report = run_loss_boxplot(tiny_loss_spec());
  const std::string csv = to_csv(report);
  CHECK(csv.substr(0, csv.find("\r\n")) ==
        "experiment,n,replicate,seed,sup_loss,status");
  CHECK(to_csv(report) == csv);

  ExperimentReport empty;
  empty.spec = report.spec;
  empty.columns = report.columns;
  CHECK(to_csv(empty) == "experiment,n,replicate,seed,sup_loss,status\r\n");
}

TEST_CASE("svg is a single well-formed root with a viewBox") {
  const ExperimentReport report = run_loss_boxplot(tiny_loss_spec());
  const std::string svg = to_svg(report);
  CHECK(svg.rfind("<svg xmlns", 0) == 0);
  CHECK(svg.find("viewBox") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t count = 0, pos = 0;
  while ((pos = svg.find("<svg", pos)) != std::string::npos) {
    ++count;
    pos += 4;
  }
  CHECK(count == 1);

  const ExperimentReport oracle =
      run_oracle_roundtrip(default_spec(ExperimentKind::OracleRoundtrip));
  CHECK_THROWS_AS(to_svg(oracle), std::invalid_argument);
}

TEST_CASE("spec json round trip") {
  ExperimentSpec spec = tiny_loss_spec();
  spec.kernel = "scalar";
  spec.t_family = "weibull";
  spec.t_params = {2.0, 1.0};
  const ExperimentSpec back = spec_from_json(spec_to_json(spec));
  CHECK(back.experiment == spec.experiment);
  CHECK(back.t_family == spec.t_family);
  CHECK(back.t_params == spec.t_params);
  CHECK(back.n_list == spec.n_list);
  CHECK(back.base_seed == spec.base_seed);
  CHECK(back.kernel == spec.kernel);
  CHECK(back.x_grid.points == spec.x_grid.points);
}

TEST_CASE("inadmissible gamma fails before any simulation") {
  ExperimentSpec spec = default_spec(ExperimentKind::RateSlope);
  spec.d = 1.0;
  spec.gamma_line = 0.2;  // denominator strip violation for d = 1
  CHECK_THROWS_AS(run_rate_slope(spec), strip_error);
}

TEST_CASE("normality requires enough replicates to standardize") {
  ExperimentSpec spec = default_spec(ExperimentKind::Normality);
  spec.replicates = 1;
  CHECK_THROWS_AS(run_normality(spec), std::invalid_argument);
}

TEST_CASE("minimax delta-zero row carries the infinity sentinel") {
  ExperimentSpec spec = default_spec(ExperimentKind::MinimaxDecay);
  spec.m_grid = {5.0};
  spec.minimax_delta = 0.0;
  const ExperimentReport report = run_minimax_decay(spec);
  REQUIRE(report.rows.size() == 1);
  CHECK(std::get<double>(report.rows[0][5]) == 0.0);          // chi2
  CHECK(std::isinf(std::get<double>(report.rows[0][6])));     // n_critical
  const std::string csv = to_csv(report);
  CHECK(csv.find("inf") != std::string::npos);
}

TEST_CASE("oracle roundtrip summary is tight") {
  const ExperimentReport report =
      run_oracle_roundtrip(default_spec(ExperimentKind::OracleRoundtrip));
  CHECK(report.rows.size() == 3u * 50u);
  CHECK(summary_value(report, "max_abs_err_gamma(2,1)") <= 1e-5);
}

TEST_SUITE_END();
