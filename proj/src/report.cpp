#include "mellinstop/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mellinstop/stats.hpp"

namespace mellinstop {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::string(buf);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string value_to_csv(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v))
    return std::to_string(std::get<std::int64_t>(v));
  if (std::holds_alternative<double>(v))
    return fmt_double(std::get<double>(v));
  return csv_escape(std::get<std::string>(v));
}

ordered_json value_to_json(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v))
    return std::get<std::int64_t>(v);
  if (std::holds_alternative<double>(v)) {
    const double d = std::get<double>(v);
    if (std::isfinite(d)) return d;
    return d > 0 ? "inf" : (d < 0 ? "-inf" : "nan");
  }
  return std::get<std::string>(v);
}

ordered_json spec_to_json_obj(const ExperimentSpec& s) {
  ordered_json j;
  j["experiment"] = experiment_name(s.experiment);
  j["process"] = s.process;
  j["d"] = s.d;
  j["H"] = s.H;
  j["sigma_shape"] = s.sigma_shape;
  j["t_family"] = s.t_family;
  j["t_params"] = s.t_params;
  j["gamma"] = s.gamma_line;
  j["beta"] = s.beta_angle;
  j["rule"] = s.rule;
  j["manual_cutoff"] = s.manual_cutoff;
  j["n_list"] = s.n_list;
  j["replicates"] = s.replicates;
  j["x_grid"] = ordered_json{
      {"lo", s.x_grid.lo}, {"hi", s.x_grid.hi}, {"points", s.x_grid.points}};
  j["x_eval"] = s.x_eval;
  j["m_grid"] = s.m_grid;
  j["minimax_delta"] = s.minimax_delta;
  j["base_seed"] = s.base_seed;
  j["threads"] = s.threads;
  j["kernel"] = s.kernel;
  return j;
}

void overlay_spec(ExperimentSpec& s, const ordered_json& j) {
  if (j.contains("experiment"))
    s.experiment = experiment_from_string(j.at("experiment"));
  if (j.contains("process")) s.process = j.at("process");
  if (j.contains("d")) s.d = j.at("d");
  if (j.contains("H")) s.H = j.at("H");
  if (j.contains("sigma_shape")) s.sigma_shape = j.at("sigma_shape");
  if (j.contains("t_family")) s.t_family = j.at("t_family");
  if (j.contains("t_params"))
    s.t_params = j.at("t_params").get<std::vector<double>>();
  if (j.contains("gamma")) s.gamma_line = j.at("gamma");
  if (j.contains("beta")) s.beta_angle = j.at("beta");
  if (j.contains("rule")) s.rule = j.at("rule");
  if (j.contains("manual_cutoff")) s.manual_cutoff = j.at("manual_cutoff");
  if (j.contains("n_list")) s.n_list = j.at("n_list").get<std::vector<long>>();
  if (j.contains("replicates")) s.replicates = j.at("replicates");
  if (j.contains("x_grid")) {
    const auto& g = j.at("x_grid");
    if (g.contains("lo")) s.x_grid.lo = g.at("lo");
    if (g.contains("hi")) s.x_grid.hi = g.at("hi");
    if (g.contains("points")) s.x_grid.points = g.at("points");
  }
  if (j.contains("x_eval")) s.x_eval = j.at("x_eval");
  if (j.contains("m_grid"))
    s.m_grid = j.at("m_grid").get<std::vector<double>>();
  if (j.contains("minimax_delta")) s.minimax_delta = j.at("minimax_delta");
  if (j.contains("base_seed")) s.base_seed = j.at("base_seed");
  if (j.contains("threads")) s.threads = j.at("threads");
  if (j.contains("kernel")) s.kernel = j.at("kernel");
}

}  // namespace

std::string to_csv(const ExperimentReport& report) {
  std::string out;
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_escape(report.columns[c]);
  }
  out += "\r\n";
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += value_to_csv(row[c]);
    }
    out += "\r\n";
  }
  return out;
}

std::string to_json(const ExperimentReport& report) {
  ordered_json j;
  j["version"] = report.version;
  j["spec"] = spec_to_json_obj(report.spec);
  j["columns"] = report.columns;
  ordered_json records = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json rec;
    for (std::size_t c = 0; c < row.size(); ++c)
      rec[report.columns[c]] = value_to_json(row[c]);
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  ordered_json summary;
  for (const auto& [k, v] : report.summary)
    summary[k] = std::isfinite(v) ? ordered_json(v)
                                  : ordered_json(v > 0 ? "inf" : "nan");
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

namespace {

struct Canvas {
  std::string body;
  double width = 640.0, height = 420.0;
  double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0;

  double px(double t) const { return ml + t * (width - ml - mr); }
  double py(double t) const { return height - mb - t * (height - mt - mb); }

  void line(double x1, double y1, double x2, double y2, const char* color,
            double w = 1.0) {
    body += "<line x1=\"" + fmt_short(x1) + "\" y1=\"" + fmt_short(y1) +
            "\" x2=\"" + fmt_short(x2) + "\" y2=\"" + fmt_short(y2) +
            "\" stroke=\"" + color + "\" stroke-width=\"" + fmt_short(w) +
            "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const char* fill) {
    body += "<rect x=\"" + fmt_short(x) + "\" y=\"" + fmt_short(y) +
            "\" width=\"" + fmt_short(w) + "\" height=\"" + fmt_short(h) +
            "\" fill=\"" + fill + "\" stroke=\"black\"/>\n";
  }
  void circle(double x, double y, double r, const char* fill) {
    body += "<circle cx=\"" + fmt_short(x) + "\" cy=\"" + fmt_short(y) +
            "\" r=\"" + fmt_short(r) + "\" fill=\"" + fill + "\"/>\n";
  }
  void text(double x, double y, const std::string& s,
            const char* anchor = "middle") {
    body += "<text x=\"" + fmt_short(x) + "\" y=\"" + fmt_short(y) +
            "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" +
            anchor + "\">" + s + "</text>\n";
  }

  std::string finish() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
           fmt_short(width) + " " + fmt_short(height) + "\">\n" + body +
           "</svg>\n";
  }
};

std::string svg_boxplot(const ExperimentReport& report) {
  Canvas c;
  const auto& ns = report.spec.n_list;
  double ymax = 1e-300;
  for (long n : ns)
    ymax = std::max(
        ymax, summary_value(report, "sup_loss_n" + std::to_string(n) + "_max"));
  ymax *= 1.05;

  c.line(c.px(0), c.py(0), c.px(1), c.py(0), "black");
  c.line(c.px(0), c.py(0), c.px(0), c.py(1), "black");
  c.text(c.px(0.5), c.height - 10.0, "sample size n");
  for (int t = 0; t <= 4; ++t) {
    const double frac = t / 4.0;
    c.line(c.px(0) - 4, c.py(frac), c.px(0), c.py(frac), "black");
    c.text(c.px(0) - 8, c.py(frac) + 4, fmt_short(frac * ymax), "end");
  }

  const double slot = 1.0 / static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::string p = "sup_loss_n" + std::to_string(ns[i]);
    const double q0 = summary_value(report, p + "_min") / ymax;
    const double q1 = summary_value(report, p + "_q25") / ymax;
    const double q2 = summary_value(report, p + "_median") / ymax;
    const double q3 = summary_value(report, p + "_q75") / ymax;
    const double q4 = summary_value(report, p + "_max") / ymax;
    const double cx = c.px((i + 0.5) * slot);
    const double half = 0.18 * slot * (c.width - c.ml - c.mr);
    c.line(cx, c.py(q0), cx, c.py(q1), "black");
    c.line(cx, c.py(q3), cx, c.py(q4), "black");
    c.line(cx - half * 0.6, c.py(q0), cx + half * 0.6, c.py(q0), "black");
    c.line(cx - half * 0.6, c.py(q4), cx + half * 0.6, c.py(q4), "black");
    c.rect(cx - half, c.py(q3), 2 * half, c.py(q1) - c.py(q3), "none");
    c.line(cx - half, c.py(q2), cx + half, c.py(q2), "black", 2.0);
    c.text(cx, c.height - 30.0, std::to_string(ns[i]));
  }
  return c.finish();
}

std::string svg_scatter_fit(const ExperimentReport& report,
                            const std::vector<double>& xs,
                            const std::vector<double>& ys,
                            const std::string& x_label,
                            const std::string& y_label) {
  Canvas c;
  double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
  for (double x : xs) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  for (double y : ys) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double xpad = 0.05 * (xmax - xmin + 1e-12);
  const double ypad = 0.05 * (ymax - ymin + 1e-12);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;
  auto tx = [&](double x) { return c.px((x - xmin) / (xmax - xmin)); };
  auto ty = [&](double y) { return c.py((y - ymin) / (ymax - ymin)); };

  c.line(c.px(0), c.py(0), c.px(1), c.py(0), "black");
  c.line(c.px(0), c.py(0), c.px(0), c.py(1), "black");
  c.text(c.px(0.5), c.height - 10.0, x_label);
  c.text(15.0, c.py(0.5), y_label, "start");
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0;
    const double fy = ymin + (ymax - ymin) * t / 4.0;
    c.text(tx(fx), c.height - 30.0, fmt_short(fx));
    c.text(c.px(0) - 8, ty(fy) + 4, fmt_short(fy), "end");
  }

  const stats::SlopeFit fit = stats::ols_slope(xs, ys);
  c.line(tx(xmin), ty(fit.intercept + fit.slope * xmin), tx(xmax),
         ty(fit.intercept + fit.slope * xmax), "firebrick", 1.5);
  for (std::size_t i = 0; i < xs.size(); ++i)
    c.circle(tx(xs[i]), ty(ys[i]), 3.5, "steelblue");
  c.text(c.px(0.98), c.py(0.95), "slope " + fmt_short(fit.slope), "end");
  (void)report;
  return c.finish();
}

}  // namespace

std::string to_svg(const ExperimentReport& report) {
  switch (report.spec.experiment) {
    case ExperimentKind::LossBoxplot:
      return svg_boxplot(report);
    case ExperimentKind::RateSlope: {
      std::vector<double> xs, ys;
      for (long n : report.spec.n_list) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(
            std::log(summary_value(report, "rmse_n" + std::to_string(n))));
      }
      return svg_scatter_fit(report, xs, ys, "ln n", "ln RMSE");
    }
    case ExperimentKind::MinimaxDecay: {
      std::vector<double> xs, ys;
      for (const auto& row : report.rows) {
        const double chi2 = std::get<double>(row[5]);
        if (chi2 > 0.0) {
          xs.push_back(std::get<double>(row[1]));
          ys.push_back(std::log(chi2));
        }
      }
      if (xs.size() < 2)
        throw std::invalid_argument("to_svg: no positive chi2 values to plot");
      return svg_scatter_fit(report, xs, ys, "M", "ln chi2");
    }
    default:
      throw std::invalid_argument(
          "to_svg: svg output supports loss_boxplot, rate_slope and "
          "minimax_decay only");
  }
}

std::string emit_to_file(const ExperimentReport& report,
                         const std::string& format, const std::string& dir) {
  std::string payload;
  if (format == "csv")
    payload = to_csv(report);
  else if (format == "json")
    payload = to_json(report);
  else if (format == "svg")
    payload = to_svg(report);
  else
    throw std::invalid_argument("emit: unknown format '" + format +
                                "' (expected csv|json|svg)");

  std::filesystem::path p(dir.empty() ? "." : dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec)
    throw std::runtime_error("emit: cannot create directory '" + dir +
                             "': " + ec.message());
  p /= std::string(experiment_name(report.spec.experiment)) + "." + format;
  std::ofstream out(p, std::ios::binary);
  if (!out)
    throw std::runtime_error("emit: cannot open '" + p.string() +
                             "' for writing");
  out.write(payload.data(),
            static_cast<std::streamsize>(payload.size()));
  if (!out)
    throw std::runtime_error("emit: write failed for '" + p.string() + "'");
  return p.string();
}

std::string spec_to_json(const ExperimentSpec& spec) {
  return spec_to_json_obj(spec).dump(2) + "\n";
}

ExperimentSpec spec_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  ExperimentSpec spec;
  if (j.contains("experiment"))
    spec = default_spec(experiment_from_string(j.at("experiment")));
  overlay_spec(spec, j);
  return spec;
}

}  // namespace mellinstop
