#include "cli_runner.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <sstream>

#include "icorr/verify.hpp"

namespace icorr::cli {

namespace {

using nlohmann::json;

struct CommonOpts {
  long precision = 50;
  int threads = 0;
  std::string out_path;
  std::string format = "json";
};

std::ostream& sink(const CommonOpts& c, std::ostream& fallback, std::ofstream& file) {
  if (c.out_path.empty()) return fallback;
  file.open(c.out_path, std::ios::binary);
  if (!file) throw Error("cannot open output file: " + c.out_path);
  return file;
}

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--precision", c.precision, "working precision, decimal digits (>= 30)")
      ->envname("ILC_PRECISION");
  cmd->add_option("--threads", c.threads, "worker thread cap (0 = hardware)");
  cmd->add_option("-o,--out", c.out_path, "output file (default stdout)");
  cmd->add_option("--format", c.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

void apply_common(const CommonOpts& c) {
  WorkingPrecision::set_digits(c.precision);
  set_max_threads(c.threads);
}

// lambda given directly or through u (lambda = cos u)
BigReal resolve_lambda(const std::string& lambda_str, const std::string& u_str) {
  if (!u_str.empty()) return cos(BigReal(u_str));
  if (lambda_str.empty()) throw DomainError("one of --lambda/--u is required");
  return BigReal(lambda_str);
}

corr::FredholmConfig make_fredholm_cfg(const std::string& rho, long points,
                                       long points_cap, long nmax,
                                       const std::string& mode, long compute_digits,
                                       const std::string& target_tol) {
  corr::FredholmConfig cfg;
  if (!rho.empty()) cfg.radius = BigReal(rho);
  if (points > 0) cfg.points = points;
  if (points_cap > 0) cfg.max_points = points_cap;
  cfg.lambda_series_cap = nmax;
  if (mode == "trace") cfg.mode = corr::FredholmMode::TracePowers;
  cfg.compute_digits = compute_digits;
  if (!target_tol.empty()) cfg.target_tol = BigReal(target_tol);
  return cfg;
}

json value_json(const corr::CorrelatorValue& v) {
  json j;
  j["value"] = v.value.str();
  j["est_error"] = v.est_error.str(8);
  j["method"] = corr::method_name(v.method);
  return j;
}

json diag_json(const corr::CorrelatorValue& v) {
  json j;
  j["quadrature_points"] = v.diag.quadrature_points;
  if (!v.diag.radius.empty()) j["radius"] = v.diag.radius;
  if (v.diag.series_terms) j["series_terms"] = v.diag.series_terms;
  if (!v.diag.note.empty()) j["note"] = v.diag.note;
  return j;
}

int cmd_eval(const CommonOpts& common, long N, const std::string& t_str,
             const BigReal& lambda, const std::string& method_str,
             const corr::FredholmConfig& cfg, std::ostream& out) {
  corr::CorrelatorRequest req;
  req.N = N;
  req.t = BigReal(t_str);
  req.lambda = lambda;
  auto m = corr::method_from_name(method_str);
  if (!m) throw DomainError("unknown method: " + method_str);
  req.method = *m;
  corr::CorrelatorValue v = corr::eval(req, cfg);
  if (common.format == "csv") {
    out << "N,t,lambda,method,value,est_error\n";
    out << N << "," << req.t.str() << "," << lambda.str() << ","
        << corr::method_name(v.method) << "," << v.value.str() << ","
        << v.est_error.str(8) << "\n";
  } else {
    json j;
    j["inputs"] = {{"N", N},
                   {"t", req.t.str()},
                   {"lambda", lambda.str()},
                   {"method", method_str},
                   {"precision", common.precision}};
    j["results"] = value_json(v);
    j["diagnostics"] = diag_json(v);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_series(const CommonOpts& common, long N, const BigReal& lambda, long order,
               std::ostream& out) {
  std::vector<BigReal> c = corr::small_t_expansion(N, lambda, order);
  if (common.format == "csv") {
    out << "power,coefficient\n";
    for (size_t m = 0; m < c.size(); ++m)
      out << (m + 1) << "," << c[m].str() << "\n";
  } else {
    json j;
    j["inputs"] = {{"N", N}, {"lambda", lambda.str()}, {"order", order},
                   {"precision", common.precision}};
    json coeffs = json::array();
    for (const BigReal& x : c) coeffs.push_back(x.str());
    j["results"] = {{"normalization", "C/(1-t)^{1/4} = 1 + sum c_m t^m"},
                    {"coefficients", coeffs}};
    j["diagnostics"] = json::object();
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_connect(const CommonOpts& common, long N, const BigReal& lambda,
                const std::string& t0_str, const std::string& t1_str,
                const std::string& tol_str, std::ostream& out) {
  BigReal t0(t0_str), t1(t1_str), tol(tol_str);
  verify::PipelineResult res = verify::run_connection_pipeline(N, lambda, t0, t1, tol);
  json j;
  j["inputs"] = {{"N", N},       {"lambda", lambda.str()}, {"t0", t0.str()},
                 {"t1", t1.str()}, {"tol", tol.str(8)},      {"precision", common.precision}};
  json fit;
  fit["sigma"] = res.fit.sigma_est.str();
  fit["degenerate"] = res.fit.degenerate;
  if (!res.fit.degenerate) {
    fit["s"] = res.fit.s_est.str();
    fit["shat"] = res.fit.shat_est.str();
    if (res.fit.K_available) fit["K"] = res.fit.K_est.str();
  }
  json closed;
  closed["sigma"] = res.closed.sigma.str();
  closed["shat"] = res.closed.shat.str();
  closed["K"] = res.closed.bigK.str();
  closed["s"] = res.closed.s.str();
  json dev;
  dev["sigma_abs"] = res.sigma_err.str(8);
  dev["shat_rel"] = res.shat_rel_err.str(8);
  dev["K_rel"] = res.K_rel_err.str(8);
  j["results"] = {{"fitted", fit}, {"closed_form", closed}, {"deviation", dev}};
  j["diagnostics"] = {{"steps_accepted", res.steps_accepted},
                      {"steps_rejected", res.steps_rejected},
                      {"max_ode_residual", res.max_residual.str(8)},
                      {"fit_window", {res.fit.window_lo.str(6), res.fit.window_hi.str(6)}},
                      {"fit_residual_norm", res.fit.residual_norm.str(8)},
                      {"fit_residual_ok", res.fit.residual_ok}};
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_verify(const CommonOpts& common, const std::string& suite, std::ostream& out) {
  verify::Report rep = verify::run_suite(suite);
  if (common.format == "csv") {
    out << "suite,case,expected,got,tolerance,pass\n";
    for (const auto& c : rep.cases)
      out << rep.suite << ",\"" << c.inputs << "\",\"" << c.expected << "\",\""
          << c.got << "\"," << c.tolerance << "," << (c.pass ? "1" : "0") << "\n";
  } else {
    json j;
    j["inputs"] = {{"suite", suite}, {"precision", common.precision}};
    json cases = json::array();
    for (const auto& c : rep.cases)
      cases.push_back({{"inputs", c.inputs},
                       {"expected", c.expected},
                       {"got", c.got},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}});
    j["results"] = {{"cases", cases},
                    {"passed", rep.n_pass()},
                    {"failed", rep.n_fail()}};
    j["diagnostics"] = {{"seconds", rep.seconds}};
    out << j.dump(2) << "\n";
  }
  return rep.ok() ? 0 : 1;
}

int cmd_table(const CommonOpts& common, long N, const BigReal& lambda,
              const std::string& tmin_str, const std::string& tmax_str, long steps,
              const std::string& method_str, const corr::FredholmConfig& cfg,
              std::ostream& out) {
  if (steps < 1) throw DomainError("table: --t-steps must be >= 1");
  BigReal tmin(tmin_str), tmax(tmax_str);
  if (tmin.sign() < 0 || tmax >= BigReal(1) || tmax < tmin)
    throw DomainError("table: grid bounds must satisfy 0 <= t-min <= t-max < 1");
  auto m = corr::method_from_name(method_str);
  if (!m) throw DomainError("unknown method: " + method_str);

  struct Row {
    std::string value, est, method, error;
  };
  std::vector<Row> rows(steps);
  std::vector<BigReal> ts;
  for (long i = 0; i < steps; ++i)
    ts.push_back(steps == 1 ? tmin : tmin + (tmax - tmin) * BigReal(i) / (steps - 1));
  long precision = common.precision;
  parallel_for(0, steps, [&](long i) {
    ScopedPrecision guard(precision);
    try {
      corr::CorrelatorRequest req;
      req.N = N;
      req.t = ts[i];
      req.lambda = lambda;
      req.method = *m;
      corr::CorrelatorValue v = corr::eval(req, cfg);
      rows[i] = {v.value.str(), v.est_error.str(8), corr::method_name(v.method), ""};
    } catch (const Error& e) {
      rows[i] = {"", "", method_str, e.what()};
    }
  });
  if (common.format == "json") {
    json j;
    j["inputs"] = {{"N", N},
                   {"lambda", lambda.str()},
                   {"t_min", tmin.str()},
                   {"t_max", tmax.str()},
                   {"steps", steps},
                   {"method", method_str},
                   {"precision", common.precision}};
    json arr = json::array();
    for (long i = 0; i < steps; ++i)
      arr.push_back({{"N", N},
                     {"t", ts[i].str()},
                     {"lambda", lambda.str()},
                     {"method", rows[i].method},
                     {"value", rows[i].value},
                     {"est_error", rows[i].est},
                     {"error", rows[i].error}});
    j["results"] = {{"rows", arr}};
    j["diagnostics"] = json::object();
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "N,t,lambda,method,value,est_error,error\n";
  for (long i = 0; i < steps; ++i)
    out << N << "," << ts[i].str() << "," << lambda.str() << "," << rows[i].method
        << "," << rows[i].value << "," << rows[i].est << "," << rows[i].error << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"lambda-generalized Ising diagonal correlations and their "
               "Painleve VI connection constants"};
  app.require_subcommand(1);

  CommonOpts common;
  long N = 0;
  std::string t_str = "0.5", lambda_str, u_str, method_str = "auto";
  std::string rho_str, mode_str = "logdet", target_tol_str;
  long points = 0, points_cap = 1L << 16, nmax = 12, compute_digits = 0;
  long order = 3, steps = 9;
  std::string tmin_str = "0.1", tmax_str = "0.9";
  std::string t0_str = "0.05", t1_str = "0.99999", tol_str = "1e-25";
  std::string suite;

  auto add_lambda = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", lambda_str, "interpolation parameter in [0,1]");
    cmd->add_option("--u", u_str, "angle with lambda = cos(u)");
  };
  auto add_fredholm = [&](CLI::App* cmd) {
    cmd->add_option("--rho", rho_str, "contour radius (default (1+k)/2)");
    cmd->add_option("--points", points, "quadrature points per contour (0 = auto)");
    cmd->add_option("--points-cap", points_cap, "quadrature size cap");
    cmd->add_option("--nmax", nmax, "lambda-series cap for trace mode");
    cmd->add_option("--fredholm-mode", mode_str, "logdet or trace")
        ->check(CLI::IsMember({"logdet", "trace"}));
    cmd->add_option("--compute-digits", compute_digits,
                    "internal Fredholm precision (0 = working precision)");
    cmd->add_option("--fredholm-tol", target_tol_str, "operator truncation target");
  };

  CLI::App* eval = app.add_subcommand("eval", "evaluate C^-(N,t;lambda)");
  add_common(eval, common);
  eval->add_option("--N", N, "diagonal separation")->required();
  eval->add_option("--t", t_str, "temperature variable in [0,1)")->required();
  add_lambda(eval);
  eval->add_option("--method", method_str,
                   "fredholm | toeplitz | theta | algebraic | auto");
  add_fredholm(eval);

  CLI::App* series = app.add_subcommand("series", "small-t expansion coefficients");
  add_common(series, common);
  series->add_option("--N", N, "diagonal separation")->required();
  add_lambda(series);
  series->add_option("--order", order, "highest power of t");

  CLI::App* connect = app.add_subcommand(
      "connect", "integrate the sigma-form ODE and fit connection constants");
  add_common(connect, common);
  connect->add_option("--N", N, "diagonal separation")->required();
  add_lambda(connect);
  connect->add_option("--t0", t0_str, "integration start");
  connect->add_option("--t1", t1_str, "integration end (close to 1)");
  connect->add_option("--tol", tol_str, "integrator tolerance");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  add_common(verify_cmd, common);
  verify_cmd->add_option("suite", suite, "toda | recurrence | identities | "
                                         "crossmethod | smallt | limits")
      ->required();

  CLI::App* table = app.add_subcommand("table", "CSV/JSON over a t-grid");
  add_common(table, common);
  table->add_option("--N", N, "diagonal separation")->required();
  add_lambda(table);
  table->add_option("--t-min", tmin_str, "grid start");
  table->add_option("--t-max", tmax_str, "grid end");
  table->add_option("--t-steps", steps, "grid size");
  table->add_option("--method", method_str, "evaluation method");
  add_fredholm(table);

  std::vector<std::string> argv_copy = args;
  std::vector<char*> argv;
  argv.push_back(const_cast<char*>("icorr"));
  for (auto& a : argv_copy) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    apply_common(common);
    if (table->parsed() && table->count("--format") == 0) common.format = "csv";
    std::ofstream file;
    std::ostream& os = sink(common, out, file);
    corr::FredholmConfig cfg = make_fredholm_cfg(rho_str, points, points_cap, nmax,
                                                 mode_str == "trace" ? "trace" : "logdet",
                                                 compute_digits, target_tol_str);
    if (eval->parsed())
      return cmd_eval(common, N, t_str, resolve_lambda(lambda_str, u_str), method_str,
                      cfg, os);
    if (series->parsed())
      return cmd_series(common, N, resolve_lambda(lambda_str, u_str), order, os);
    if (connect->parsed())
      return cmd_connect(common, N, resolve_lambda(lambda_str, u_str), t0_str, t1_str,
                         tol_str, os);
    if (verify_cmd->parsed()) return cmd_verify(common, suite, os);
    if (table->parsed())
      return cmd_table(common, N, resolve_lambda(lambda_str, u_str), tmin_str,
                       tmax_str, steps, method_str, cfg, os);
    err << "no subcommand\n";
    return 2;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace icorr::cli
