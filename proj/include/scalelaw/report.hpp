// Self-contained SVG rendering of a fitted learning curve: observed
// points with error bars on a logarithmic size axis, the fitted law
// extended past the data, and the asymptote annotation.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "scalelaw/core.hpp"
#include "scalelaw/fit.hpp"
#include "scalelaw/model.hpp"

namespace scalelaw {

struct ReportOptions {
  double extend_to = 2e7;   // draw the fitted curve out to this size
  int curve_samples = 240;
  int width = 720;
  int height = 480;
};

/// Log-spaced samples of the law over [n_min, n_max], rounded to integer
/// sizes (deduplicated), evaluated at the rounded size.
inline std::vector<ObservationPoint> sample_curve(const DataLawParams& p, double n_min,
                                                  double n_max, int count) {
  require_valid(p);
  if (!(n_min >= 1.0) || !(n_max >= n_min)) throw Error("invalid sampling range");
  if (count < 2) throw Error("need at least 2 curve samples");

  std::vector<ObservationPoint> samples;
  samples.reserve(count);
  const double lo = std::log(n_min), hi = std::log(n_max);
  std::int64_t last_n = 0;
  for (int i = 0; i < count; ++i) {
    const double x = std::exp(lo + (hi - lo) * i / (count - 1));
    const std::int64_t n = std::max<std::int64_t>(1, std::llround(x));
    if (n == last_n) continue;
    last_n = n;
    samples.push_back({n, std::nullopt, eval_data_law(p, static_cast<double>(n)), std::nullopt, 1});
  }
  return samples;
}

namespace detail {

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string fmt_sig(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace detail

/// Renders the report chart as an SVG 1.1 document string. Element
/// classes: "obs" (data markers), "errbar", "fit" (curve path),
/// "asymptote", "xtick"/"xlabel" (decade ticks), "ytick"/"ylabel".
inline std::string render_report_svg(const std::vector<ObservationPoint>& points,
                                     const FitResult<DataLawParams>& fit,
                                     const ReportOptions& opt = {}) {
  const std::vector<ObservationPoint> pts = validate_points(points);
  require_valid(fit.params);

  const double ml = 70, mr = 28, mt = 44, mb = 58;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;

  double n_max_obs = 1;
  for (const ObservationPoint& p : pts) n_max_obs = std::max(n_max_obs, static_cast<double>(p.n));
  const double x_lo = std::pow(10.0, std::floor(std::log10(static_cast<double>(pts.front().n))));
  double x_hi = std::max(opt.extend_to, n_max_obs);
  if (x_hi <= x_lo * (1 + 1e-9)) x_hi = x_lo * 10;  // degenerate span, widen a decade

  const std::vector<ObservationPoint> curve =
      sample_curve(fit.params, x_lo, x_hi, opt.curve_samples);

  double y_lo = fit.params.c_inf, y_hi = 0.0;
  for (const ObservationPoint& p : pts) {
    const double s = p.std_dev.value_or(0.0);
    y_lo = std::min(y_lo, p.error - s);
    y_hi = std::max(y_hi, p.error + s);
  }
  for (const ObservationPoint& p : curve) {
    y_lo = std::min(y_lo, p.error);
    y_hi = std::max(y_hi, p.error);
  }
  const double pad = std::max(0.02 * (y_hi - y_lo), 1e-6);
  y_lo = std::max(0.0, y_lo - pad);
  y_hi = std::min(1.0, y_hi + pad);

  const double lx_lo = std::log10(x_lo), lx_hi = std::log10(x_hi);
  auto px = [&](double n) { return ml + (std::log10(n) - lx_lo) / (lx_hi - lx_lo) * pw; };
  auto py = [&](double e) { return mt + (y_hi - e) / (y_hi - y_lo) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) +
         "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " + std::to_string(opt.height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" fill=\"white\"/>\n";
  svg += "<text class=\"title\" x=\"" + detail::fmt2(ml + pw / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">test error vs training-set size</text>\n";

  // plot frame
  svg += "<rect x=\"" + detail::fmt2(ml) + "\" y=\"" + detail::fmt2(mt) + "\" width=\"" +
         detail::fmt2(pw) + "\" height=\"" + detail::fmt2(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade ticks on the logarithmic x axis
  for (int d = static_cast<int>(std::ceil(lx_lo - 1e-9)); std::pow(10.0, d) <= x_hi * (1 + 1e-9);
       ++d) {
    const double x = px(std::pow(10.0, d));
    svg += "<line class=\"xtick\" x1=\"" + detail::fmt2(x) + "\" y1=\"" + detail::fmt2(mt + ph) +
           "\" x2=\"" + detail::fmt2(x) + "\" y2=\"" + detail::fmt2(mt + ph + 6) +
           "\" stroke=\"black\"/>\n";
    svg += "<text class=\"xlabel\" x=\"" + detail::fmt2(x) + "\" y=\"" +
           detail::fmt2(mt + ph + 22) + "\" text-anchor=\"middle\">10<tspan dy=\"-5\" font-size=\"9\">" +
           std::to_string(d) + "</tspan></text>\n";
  }
  // y ticks, 5 even divisions
  for (int i = 0; i <= 4; ++i) {
    const double e = y_lo + (y_hi - y_lo) * i / 4.0;
    const double y = py(e);
    svg += "<line class=\"ytick\" x1=\"" + detail::fmt2(ml - 6) + "\" y1=\"" + detail::fmt2(y) +
           "\" x2=\"" + detail::fmt2(ml) + "\" y2=\"" + detail::fmt2(y) + "\" stroke=\"black\"/>\n";
    svg += "<text class=\"ylabel\" x=\"" + detail::fmt2(ml - 10) + "\" y=\"" +
           detail::fmt2(y + 4) + "\" text-anchor=\"end\">" + detail::fmt_sig(e) + "</text>\n";
  }
  svg += "<text x=\"" + detail::fmt2(ml + pw / 2) + "\" y=\"" +
         detail::fmt2(static_cast<double>(opt.height) - 14) +
         "\" text-anchor=\"middle\">training examples n (log scale)</text>\n";
  svg += "<text x=\"20\" y=\"" + detail::fmt2(mt + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         detail::fmt2(mt + ph / 2) + ")\">error probability</text>\n";

  // asymptote at c_inf
  const double ya = py(fit.params.c_inf);
  svg += "<line class=\"asymptote\" x1=\"" + detail::fmt2(ml) + "\" y1=\"" + detail::fmt2(ya) +
         "\" x2=\"" + detail::fmt2(ml + pw) + "\" y2=\"" + detail::fmt2(ya) +
         "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
  svg += "<text class=\"asymptote-label\" x=\"" + detail::fmt2(ml + 8) + "\" y=\"" +
         detail::fmt2(ya - 6) + "\" fill=\"#666\">c&#8734; = " + detail::fmt_sig(fit.params.c_inf) +
         "</text>\n";

  // fitted curve
  svg += "<path class=\"fit\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.8\" d=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    svg += (i == 0 ? "M " : " L ");
    svg += detail::fmt2(px(static_cast<double>(curve[i].n))) + " " + detail::fmt2(py(curve[i].error));
  }
  svg += "\"/>\n";

  // observed points with std bars
  for (const ObservationPoint& p : pts) {
    const double x = px(static_cast<double>(p.n));
    if (p.std_dev && *p.std_dev > 0.0) {
      svg += "<line class=\"errbar\" x1=\"" + detail::fmt2(x) + "\" y1=\"" +
             detail::fmt2(py(p.error - *p.std_dev)) + "\" x2=\"" + detail::fmt2(x) + "\" y2=\"" +
             detail::fmt2(py(p.error + *p.std_dev)) + "\" stroke=\"#c23b22\"/>\n";
    }
    svg += "<circle class=\"obs\" cx=\"" + detail::fmt2(x) + "\" cy=\"" +
           detail::fmt2(py(p.error)) + "\" r=\"4\" fill=\"#c23b22\"/>\n";
  }

  // legend
  const double lx = ml + pw - 150, ly = mt + 14;
  svg += "<circle cx=\"" + detail::fmt2(lx) + "\" cy=\"" + detail::fmt2(ly) +
         "\" r=\"4\" fill=\"#c23b22\"/>\n";
  svg += "<text x=\"" + detail::fmt2(lx + 10) + "\" y=\"" + detail::fmt2(ly + 4) +
         "\">observed</text>\n";
  svg += "<line x1=\"" + detail::fmt2(lx - 6) + "\" y1=\"" + detail::fmt2(ly + 18) + "\" x2=\"" +
         detail::fmt2(lx + 6) + "\" y2=\"" + detail::fmt2(ly + 18) +
         "\" stroke=\"#1f6fb2\" stroke-width=\"1.8\"/>\n";
  svg += "<text x=\"" + detail::fmt2(lx + 10) + "\" y=\"" + detail::fmt2(ly + 22) +
         "\">fitted curve</text>\n";

  svg += "</svg>\n";
  return svg;
}

}  // namespace scalelaw
