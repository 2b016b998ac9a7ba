// Command-line front end: fit, predict, invert, simulate, regions, report.
//
// Exit codes: 0 success, 1 input or validation error, 2 fit did not
// converge. Results go to stdout, diagnostics to stderr.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scalelaw/scalelaw.hpp"

namespace {

using nlohmann::json;
using namespace scalelaw;

std::vector<ObservationPoint> load_points(const std::string& input, const std::string& fixture) {
  if (!fixture.empty()) return builtin_fixture(fixture);
  if (!input.empty()) return read_points(input);
  throw Error("need --input or --fixture");
}

DataLawParams parse_param_triple(const std::string& text) {
  double v[3];
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf%n", &v[0], &v[1], &v[2], &consumed) != 3 ||
      consumed != static_cast<int>(text.size()))
    throw Error("expected --params a,alpha,cinf (three comma-separated numbers)");
  DataLawParams p{v[0], v[1], v[2]};
  require_valid(p);
  return p;
}

DataLawParams load_fit_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  json j = json::parse(in, nullptr, true, true);
  for (const char* key : {"a", "alpha", "c_inf"})
    if (!j.contains(key)) throw Error(std::string("fit file missing field '") + key + "'");
  DataLawParams p{j["a"].get<double>(), j["alpha"].get<double>(), j["c_inf"].get<double>()};
  require_valid(p);
  return p;
}

DataLawParams resolve_params(const std::string& params, const std::string& from_fit) {
  if (!params.empty()) return parse_param_triple(params);
  if (!from_fit.empty()) return load_fit_json(from_fit);
  throw Error("need --params or --from-fit");
}

json fit_to_json(const FitResult<DataLawParams>& fit) {
  return json{{"a", fit.params.a},          {"alpha", fit.params.alpha},
              {"c_inf", fit.params.c_inf},  {"sse", fit.sse},
              {"mse", fit.mse},             {"iterations", fit.iterations},
              {"converged", fit.converged}};
}

void print_fit_text(const FitResult<DataLawParams>& fit) {
  std::printf("a           = %.10g\n", fit.params.a);
  std::printf("alpha       = %.10g\n", fit.params.alpha);
  std::printf("c_inf       = %.10g\n", fit.params.c_inf);
  std::printf("sse         = %.6e\n", fit.sse);
  std::printf("mse         = %.6e\n", fit.mse);
  std::printf("iterations  = %d\n", fit.iterations);
  std::printf("converged   = %s\n", fit.converged ? "yes" : "no");
  std::printf("start_index = %d\n", fit.start_index);
}

struct FitFlags {
  std::string input, fixture, init;
  bool fix_cinf_zero = false;
  int multi_start = 0;
  std::int64_t seed = 0;
  double mse_stop = FitOptions{}.mse_stop;
  double step_stop = FitOptions{}.step_stop;
  int max_iter = FitOptions{}.max_iterations;
  bool as_json = false;
};

FitResult<DataLawParams> run_fit(const FitFlags& f) {
  FitOptions opts;
  opts.fix_c_inf_to_zero = f.fix_cinf_zero;
  opts.multi_start = f.multi_start;
  opts.seed = static_cast<std::uint64_t>(f.seed);
  opts.mse_stop = f.mse_stop;
  opts.step_stop = f.step_stop;
  opts.max_iterations = f.max_iter;
  if (!f.init.empty()) opts.init = parse_param_triple(f.init);
  return fit_data_law(load_points(f.input, f.fixture), opts);
}

void add_input_flags(CLI::App* cmd, FitFlags& f) {
  CLI::Option* in = cmd->add_option("--input", f.input, "observations CSV file");
  cmd->add_option("--fixture", f.fixture, "bundled dataset name (table1)")->excludes(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scalelaw: fit, evaluate, invert and extrapolate error power-laws"};
  app.require_subcommand(1);
  int rc = 0;

  // ---- fit ----------------------------------------------------------
  auto fit_flags = std::make_shared<FitFlags>();
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit the data-scaling law to observations");
  add_input_flags(fit_cmd, *fit_flags);
  fit_cmd->add_flag("--fix-cinf-zero", fit_flags->fix_cinf_zero, "pin c_inf to exactly 0");
  fit_cmd->add_option("--init", fit_flags->init, "initial point a,alpha,cinf");
  fit_cmd->add_option("--multi-start", fit_flags->multi_start, "extra seeded starts");
  fit_cmd->add_option("--seed", fit_flags->seed, "seed for multi-start draws");
  fit_cmd->add_option("--mse-stop", fit_flags->mse_stop, "stop once sse/points is this small");
  fit_cmd->add_option("--step-stop", fit_flags->step_stop, "stop once the relative step is this small");
  fit_cmd->add_option("--max-iter", fit_flags->max_iter, "iteration budget");
  fit_cmd->add_flag("--json", fit_flags->as_json, "emit a JSON object");
  fit_cmd->callback([fit_flags, &rc] {
    const FitResult<DataLawParams> fit = run_fit(*fit_flags);
    if (fit_flags->as_json)
      std::cout << fit_to_json(fit).dump(2) << "\n";
    else
      print_fit_text(fit);
    if (!fit.converged) {
      std::cerr << "warning: fit did not converge within iteration budget\n";
      rc = 2;
    }
  });

  // ---- predict ------------------------------------------------------
  struct PredictFlags {
    std::string params, from_fit;
    std::vector<double> at;
    bool as_json = false;
  };
  auto pf = std::make_shared<PredictFlags>();
  CLI::App* predict_cmd = app.add_subcommand("predict", "evaluate the law at given sizes");
  predict_cmd->add_option("--params", pf->params, "law parameters a,alpha,cinf");
  predict_cmd->add_option("--from-fit", pf->from_fit, "JSON file produced by fit --json");
  predict_cmd->add_option("--at", pf->at, "sizes n to evaluate")->delimiter(',')->required();
  predict_cmd->add_flag("--json", pf->as_json, "emit a JSON object");
  predict_cmd->callback([pf] {
    const DataLawParams p = resolve_params(pf->params, pf->from_fit);
    json preds = json::array();
    for (double n : pf->at) {
      const double e = eval_data_law(p, n);
      if (pf->as_json)
        preds.push_back({{"n", n}, {"error", e}});
      else
        std::printf("eps(%.10g) = %.10g (%.1f%%)\n", n, e, 100.0 * e);
    }
    if (pf->as_json) std::cout << json{{"predictions", preds}}.dump(2) << "\n";
  });

  // ---- invert -------------------------------------------------------
  struct InvertFlags {
    std::string params, from_fit;
    double target = 0.0;
    bool as_json = false;
  };
  auto inv = std::make_shared<InvertFlags>();
  CLI::App* invert_cmd = app.add_subcommand("invert", "training-set size needed for a target error");
  invert_cmd->add_option("--params", inv->params, "law parameters a,alpha,cinf");
  invert_cmd->add_option("--from-fit", inv->from_fit, "JSON file produced by fit --json");
  invert_cmd->add_option("--target", inv->target, "target error probability")->required();
  invert_cmd->add_flag("--json", inv->as_json, "emit a JSON object");
  invert_cmd->callback([inv] {
    const DataLawParams p = resolve_params(inv->params, inv->from_fit);
    const double n = invert_data_law(p, inv->target);
    if (inv->as_json)
      std::cout << json{{"target", inv->target}, {"n", n}}.dump(2) << "\n";
    else
      std::printf("n(%.10g) = %.10g (~%.3e)\n", inv->target, n, n);
  });

  // ---- simulate -----------------------------------------------------
  struct SimulateFlags {
    std::string params, out;
    std::vector<std::int64_t> sizes;
    double noise = 0.0;
    std::int64_t seed = 0;
    int replicates = 1;
  };
  auto sim = std::make_shared<SimulateFlags>();
  CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a synthetic learning curve as CSV");
  sim_cmd->add_option("--params", sim->params, "law parameters a,alpha,cinf")->required();
  sim_cmd->add_option("--sizes", sim->sizes, "training-set sizes")->delimiter(',')->required();
  sim_cmd->add_option("--noise", sim->noise, "gaussian noise std on the error");
  sim_cmd->add_option("--seed", sim->seed, "noise seed");
  sim_cmd->add_option("--replicates", sim->replicates, "points per size");
  sim_cmd->add_option("--out", sim->out, "output CSV path (default stdout)");
  sim_cmd->callback([sim] {
    const DataLawParams p = parse_param_triple(sim->params);
    const std::vector<ObservationPoint> pts =
        gen_curve(p, sim->sizes, sim->noise, static_cast<std::uint64_t>(sim->seed),
                  sim->replicates);
    if (sim->out.empty())
      write_points(pts, std::cout);
    else
      write_points(pts, sim->out);
  });

  // ---- regions ------------------------------------------------------
  struct RegionFlags {
    FitFlags fit;
    double eps0 = 0.5;
    double tol_guess = kDefaultTolGuess;
    double tol_floor = kDefaultTolFloor;
  };
  auto reg = std::make_shared<RegionFlags>();
  CLI::App* reg_cmd = app.add_subcommand("regions", "label points by data-scaling regime");
  add_input_flags(reg_cmd, reg->fit);
  reg_cmd->add_option("--eps0", reg->eps0, "random-guess error (0.5 for balanced binary)");
  reg_cmd->add_option("--tol-guess", reg->tol_guess, "distance from eps0 still counted as guessing");
  reg_cmd->add_option("--tol-floor", reg->tol_floor, "power-term level treated as irreducible");
  reg_cmd->callback([reg, &rc] {
    const std::vector<ObservationPoint> pts = load_points(reg->fit.input, reg->fit.fixture);
    const FitResult<DataLawParams> fit = fit_data_law(pts);
    if (!fit.converged) {
      std::cerr << "error: cannot classify without fit (did not converge)\n";
      rc = 2;
      return;
    }
    const EnvelopeParams env{reg->eps0, 1.0};  // eta plays no role in classification
    const RegionBoundaries b = region_boundaries(fit.params, env, reg->tol_guess, reg->tol_floor);
    std::printf("n_enter_power_law   = %.6g\n", b.n_enter_power_law);
    std::printf("n_enter_irreducible = %.6g\n", b.n_enter_irreducible);
    for (const auto& [pt, label] : classify_points(pts, fit, env, reg->tol_guess, reg->tol_floor))
      std::printf("n=%-10lld error=%.6g  %s\n", static_cast<long long>(pt.n), pt.error,
                  to_string(label));
  });

  // ---- report -------------------------------------------------------
  struct ReportFlags {
    FitFlags fit;
    std::string from_fit, out_svg, out_csv;
    double extend_to = 2e7;
  };
  auto rep = std::make_shared<ReportFlags>();
  CLI::App* rep_cmd = app.add_subcommand("report", "render the fitted curve as SVG and CSV");
  add_input_flags(rep_cmd, rep->fit);
  rep_cmd->add_flag("--fix-cinf-zero", rep->fit.fix_cinf_zero, "pin c_inf to exactly 0");
  rep_cmd->add_option("--from-fit", rep->from_fit, "use parameters from fit --json instead of fitting");
  rep_cmd->add_option("--out-svg", rep->out_svg, "chart output path");
  rep_cmd->add_option("--out-csv", rep->out_csv, "fitted-curve samples output path");
  rep_cmd->add_option("--extend-to", rep->extend_to, "extend the fitted curve to this size");
  rep_cmd->callback([rep, &rc] {
    if (rep->out_svg.empty() && rep->out_csv.empty())
      throw Error("need --out-svg and/or --out-csv");
    const std::vector<ObservationPoint> pts = load_points(rep->fit.input, rep->fit.fixture);
    FitResult<DataLawParams> fit;
    if (!rep->from_fit.empty()) {
      fit.params = load_fit_json(rep->from_fit);
      fit.sse = sse(fit.params, pts);
      fit.mse = fit.sse / pts.size();
      fit.converged = true;
    } else {
      fit = run_fit(rep->fit);
      if (!fit.converged) {
        std::cerr << "error: fit did not converge; no report written\n";
        rc = 2;
        return;
      }
    }
    ReportOptions opt;
    opt.extend_to = rep->extend_to;
    if (!rep->out_svg.empty()) {
      std::ofstream out(rep->out_svg);
      if (!out) throw Error("cannot open '" + rep->out_svg + "' for writing");
      out << render_report_svg(pts, fit, opt);
      if (!out) throw Error("write failed for '" + rep->out_svg + "'");
    }
    if (!rep->out_csv.empty()) {
      const std::vector<ObservationPoint> sorted = validate_points(pts);
      const double x_lo =
          std::pow(10.0, std::floor(std::log10(static_cast<double>(sorted.front().n))));
      const double x_hi =
          std::max(opt.extend_to, static_cast<double>(sorted.back().n));
      write_points(sample_curve(fit.params, x_lo, x_hi, opt.curve_samples), rep->out_csv);
    }
    std::printf("fit: a=%.6g alpha=%.6g c_inf=%.6g sse=%.3e\n", fit.params.a, fit.params.alpha,
                fit.params.c_inf, fit.sse);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
