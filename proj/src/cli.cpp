#include "qmod/cli.hpp"

#include "qmod/asymptotics.hpp"
#include "qmod/format.hpp"
#include "qmod/gaussian.hpp"
#include "qmod/modforms.hpp"
#include "qmod/predictor.hpp"
#include "qmod/real.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qmod {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Builder = std::function<QSeries(long)>;

const std::map<std::string, Builder>& series_registry() {
  static const std::map<std::string, Builder> reg = [] {
    std::map<std::string, Builder> r;
    r["j"] = j_function;
    r["E4"] = e4;
    r["eta"] = eta;
    r["theta0"] = [](long n) { return theta(0, n); };
    r["theta2"] = [](long n) { return theta(2, n); };
    r["theta3"] = [](long n) { return theta(3, n); };
    for (int i : {1, 2, 3}) r["H" + std::to_string(i)] = [i](long n) { return h_series(i, n); };
    for (int N : hauptmodul_levels()) r["j" + std::to_string(N)] = [N](long n) { return hauptmodul(N, n); };
    r["j4star"] = j4_star;
    r["H1star"] = [](long n) { return pf_expand(forms::H1star(), ExponentGrid(1), n); };
    r["H2star"] = h2_star;
    r["H3star"] = h3_star;
    r["j2star"] = [](long n) { return pf_expand(forms::j2star(), ExponentGrid(1), n); };
    return r;
  }();
  return reg;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

std::vector<Real> parse_reals(const std::vector<std::string>& in, const char* what) {
  std::vector<Real> out;
  for (const auto& s : in) {
    Real x;
    try {
      x = Real(s);
    } catch (const std::exception&) {
      throw UsageError(std::string("invalid ") + what + " value '" + s + "'");
    }
    if (!(x > 0)) throw UsageError(std::string(what) + " must be positive, got " + s);
    out.push_back(x);
  }
  if (out.empty()) throw UsageError(std::string("at least one ") + what + " value is required");
  return out;
}

void check_order(long order) {
  if (order < 0 || order > kMaxOrder) {
    throw UsageError("order must lie in [0, " + std::to_string(kMaxOrder) + "], got " + std::to_string(order));
  }
}

std::string opt_exponent(const std::optional<mpq_class>& e) { return e ? exponent_to_string(*e) : ""; }

// expand ---------------------------------------------------------------------

int cmd_expand(const RunConfig& cfg, std::ostream& os) {
  const auto& reg = series_registry();
  auto it = reg.find(cfg.name);
  if (it == reg.end()) throw UsageError("unknown series '" + cfg.name + "'; registry: " + join(series_names()));
  check_order(cfg.order);
  QSeries s = it->second(cfg.order);
  if (s.order() > cfg.order * s.denom()) s = s.truncated(cfg.order * s.denom());
  const auto fmt = output_format_from_string(cfg.format);
  if (fmt == OutputFormat::table) {
    os << cfg.name << " = " << to_string(s, static_cast<std::size_t>(-1)) << '\n';
    return 0;
  }
  ReportTable t{{"exponent", "coefficient"}, {}};
  for (long k = s.vmin(); k <= s.order(); ++k) {
    t.add({exponent_to_string(mpq_class(k, s.denom())), s.at(k).get_str()});
  }
  if (fmt == OutputFormat::csv) {
    write_csv(os, t);
  } else {
    nlohmann::json j = to_json(s);
    j["series"] = cfg.name;
    nlohmann::json ex = nlohmann::json::array();
    for (long k = s.vmin(); k <= s.order(); ++k) ex.push_back(exponent_to_string(mpq_class(k, s.denom())));
    j["exponents"] = ex;
    os << j.dump(2) << '\n';
  }
  return 0;
}

// verify ---------------------------------------------------------------------

int emit_reports(const std::vector<VerificationReport>& reps, const RunConfig& cfg, std::ostream& os) {
  ReportTable t{{"suite", "check", "passed", "checked_through", "first_mismatch", "detail"}, {}};
  std::size_t pass = 0, total = 0;
  for (const auto& r : reps) {
    for (const auto& c : r.checks) {
      t.add({r.suite, c.name, c.passed, exponent_to_string(c.checked_through), opt_exponent(c.first_mismatch),
             c.detail});
      ++total;
      pass += c.passed;
    }
  }
  const auto fmt = output_format_from_string(cfg.format);
  if (fmt == OutputFormat::json) {
    nlohmann::json j{{"suite", cfg.name}, {"passed", pass == total}, {"checks", t.to_json()}};
    os << j.dump(2) << '\n';
  } else {
    write_report(os, t, fmt);
    if (fmt == OutputFormat::table) {
      os << pass << "/" << total << " checks passed\n";
      if (reps.size() > 1) {
        const auto ok = std::count_if(reps.begin(), reps.end(), [](const auto& r) { return r.passed(); });
        os << ok << "/" << reps.size() << " levels passed\n";
      }
    }
  }
  return pass == total ? 0 : 1;
}

int cmd_verify_table2(const RunConfig& cfg, std::ostream& os) {
  const auto rhos = parse_reals(cfg.rhos.empty() ? std::vector<std::string>{"0.01"} : cfg.rhos, "rho");
  const auto lams = cfg.lambdas.empty() ? rhos : parse_reals(cfg.lambdas, "lambda");
  for (const auto& r : rhos)
    if (r > Real("0.1")) throw UsageError("table2 needs rho in (0, 0.1]");
  for (const auto& r : lams)
    if (r > Real("0.1")) throw UsageError("table2 needs lambda in (0, 0.1]");
  if (rhos.size() != lams.size()) throw UsageError("--rho and --lambda need equally many values");
  const Table2Report rep = verify_table2(rhos, lams);
  ReportTable t{{"row", "rho", "lambda", "mean_scaled", "var_scaled", "log_scaled", "passed"}, {}};
  std::size_t pass = 0;
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const auto& c = rep.checks[i];
    const Real& lam = lams[i % lams.size()];
    t.add({c.label, format_real(c.rho), format_real(lam), format_real(c.mean_scaled), format_real(c.var_scaled),
           format_real(c.log_scaled), c.passed});
    pass += c.passed;
  }
  const auto fmt = output_format_from_string(cfg.format);
  if (fmt == OutputFormat::json) {
    os << nlohmann::json{{"suite", "table2"}, {"passed", rep.passed()}, {"checks", t.to_json()}}.dump(2) << '\n';
  } else {
    write_report(os, t, fmt);
    if (fmt == OutputFormat::table) os << pass << "/" << rep.checks.size() << " passed\n";
  }
  return rep.passed() ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, std::ostream& os) {
  const std::string& s = cfg.name;
  if (s == "table2") return cmd_verify_table2(cfg, os);
  check_order(cfg.order);
  std::vector<VerificationReport> reps;
  auto levels = [&](const std::vector<int>& all) {
    if (cfg.level == 0) return all;
    if (std::find(all.begin(), all.end(), cfg.level) == all.end()) {
      throw UsageError("level " + std::to_string(cfg.level) + " not available for suite " + s);
    }
    return std::vector<int>{static_cast<int>(cfg.level)};
  };
  if (s == "theta") {
    reps.push_back(verify_theta_identities(cfg.order, cfg.seed));
  } else if (s == "hforms") {
    reps.push_back(verify_h_closed_forms(cfg.order));
  } else if (s == "table1") {
    for (int N : levels(hauptmodul_levels())) reps.push_back(verify_table1(N, cfg.order));
  } else if (s == "phi") {
    for (int N : levels({4, 9, 25})) reps.push_back(verify_phi_eta(N, cfg.order));
  } else if (s == "j4star") {
    reps.push_back(verify_j4_star(cfg.order));
  } else if (s == "dominance") {
    reps.push_back(verify_dominance(cfg.order));
  } else if (s == "signs") {
    reps.push_back(verify_sign_patterns(cfg.order));
  } else {
    throw UsageError("unknown suite '" + s + "'; suites: theta, hforms, table1, table2, phi, j4star, dominance, signs");
  }
  return emit_reports(reps, cfg, os);
}

// predict --------------------------------------------------------------------

int cmd_predict(const RunConfig& cfg, std::ostream& os) {
  const Family* fam = nullptr;
  try {
    fam = &family(cfg.name);
  } catch (const PredictorError& e) {
    throw UsageError(e.what());
  }
  const long from = cfg.n_from ? cfg.n_from : fam->sweep_from;
  const long to = cfg.n_to ? cfg.n_to : (cfg.n_from ? from : fam->sweep_to);
  const long step = cfg.step;
  if (from < fam->n_min) throw UsageError(fam->name + ": --from must be >= " + std::to_string(fam->n_min));
  if (to < from || step < 1) throw UsageError("need --to >= --from and --step >= 1");
  if (fam->exponent_of(to) > kMaxOrder) {
    throw UsageError("range too large for the order guard (exponent " + std::to_string(fam->exponent_of(to)) +
                     " > " + std::to_string(kMaxOrder) + ")");
  }
  const SweepResult res = sweep(*fam, from, to, step);
  ReportTable t{{"n", "rho_n", "log_exact", "log_saddle", "log_closed", "ratio_saddle", "ratio_closed", "sign_ok"},
                {}};
  for (const auto& r : res.reports) {
    t.add({r.n, format_real(r.rho_n), format_real(r.log_exact), format_real(r.log_saddle),
           format_real(r.log_closed), format_real(r.ratio_saddle), format_real(r.ratio_closed), r.sign_ok});
  }
  const auto& sm = res.summary;
  const bool single = res.reports.size() < 2;
  const bool trend = single || sm.trend_ok;
  const bool met = sm.in_band && trend;
  const std::vector<std::pair<std::string, nlohmann::json>> summary{
      {"rows", res.reports.size()},
      {"max_dev_last_quartile", format_real(sm.max_dev_last_quartile)},
      {"first_dev", format_real(sm.first_dev)},
      {"last_dev", format_real(sm.last_dev)},
      {"slope_vs_inv_sqrt_n", format_real(sm.slope)},
      {"in_band", sm.in_band},
      {"trend_ok", trend},
      {"halved", sm.halved},
      {"gap_first", format_real(sm.gap_first)},
      {"gap_last", format_real(sm.gap_last)},
      {"gap_decreasing", sm.gap_decreasing},
      {"criteria_met", met}};
  const auto fmt = output_format_from_string(cfg.format);
  if (fmt == OutputFormat::json) {
    nlohmann::json js = nlohmann::json::object();
    for (const auto& [k, v] : summary) js[k] = v;
    os << nlohmann::json{{"family", res.family}, {"rows", t.to_json()}, {"summary", js}}.dump(2) << '\n';
  } else {
    write_report(os, t, fmt);
    for (const auto& [k, v] : summary) {
      os << "# " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  }
  return met ? 0 : 1;
}

// gaussian -------------------------------------------------------------------

ProductForm form_from_config(const RunConfig& cfg) {
  try {
    if (cfg.name == "jNinv" || cfg.name == "phi") return forms::by_name(cfg.name, cfg.level);
    return forms::by_name(cfg.name, cfg.a, cfg.b, cfg.c);
  } catch (const AsymptoticsError& e) {
    throw UsageError(e.what());
  }
}

int cmd_gaussian(const RunConfig& cfg, std::ostream& os) {
  const ProductForm form = form_from_config(cfg);
  if (!form.nonnegative()) throw UsageError(form.name + " is not a nonnegative-coefficient form");
  const auto rhos = parse_reals(cfg.rhos, "rho");
  for (const auto& r : rhos)
    if (r > Real("0.2")) throw UsageError("gaussian needs rho in (0, 0.2]");
  if (cfg.theta_points < kMinThetaPoints) {
    throw UsageError("--points must be at least " + std::to_string(kMinThetaPoints));
  }
  ReportTable t{{"rho", "sigma", "l1_distance", "theta_points", "lyapunov_ratio"}, {}};
  for (const auto& r : rhos) {
    const GaussianReport g = char_deviation(form, r, cfg.theta_points);
    t.add({format_real(g.rho), format_real(g.sigma), format_real(g.l1_distance), g.theta_points,
           format_real(g.lyapunov_ratio)});
  }
  const auto fmt = output_format_from_string(cfg.format);
  if (fmt == OutputFormat::json) {
    os << nlohmann::json{{"form", form.name}, {"rows", t.to_json()}}.dump(2) << '\n';
  } else {
    write_report(os, t, fmt);
  }
  return 0;
}

// em-check -------------------------------------------------------------------

int cmd_em(const RunConfig& cfg, std::ostream& os) {
  EmKind kind;
  try {
    kind = em_kind_from_string(cfg.name);
  } catch (const AsymptoticsError& e) {
    throw UsageError(e.what());
  }
  const auto rhos = parse_reals(cfg.rhos, "rho");
  for (const auto& r : rhos)
    if (r > Real("0.2")) throw UsageError("em-check needs rho in (0, 0.2]");
  const long m = cfg.a ? cfg.a : 1, a = cfg.b ? cfg.b : 1;
  const auto rows = em_residual(kind, rhos, m, a);
  ReportTable t{{"quantity", "rho", "value", "main", "residual", "scaled"}, {}};
  for (const auto& r : rows) {
    t.add({to_string(kind), format_real(r.rho), format_real(r.value), format_real(r.main), format_real(r.residual),
           format_real(r.scaled)});
  }
  write_report(os, t, output_format_from_string(cfg.format));
  return 0;
}

}  // namespace

std::vector<std::string> series_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : series_registry()) out.push_back(k);
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact q-series, saddle-point predictions and Gaussian diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--output", cfg.output, "write to this file instead of stdout");
  app.add_option("--precision", cfg.precision, "working precision in decimal digits (>= 40)");

  auto* expand = app.add_subcommand("expand", "print an exact q-expansion");
  expand->add_option("--series", cfg.name, "series name")->required();
  expand->add_option("--order", cfg.order, "last exponent of q");

  auto* verify = app.add_subcommand("verify", "run an identity suite");
  verify->add_option("--suite", cfg.name, "theta, hforms, table1, table2, phi, j4star, dominance, signs")
      ->required();
  verify->add_option("--order", cfg.order, "check through this exponent of q");
  verify->add_option("--level", cfg.level, "restrict table1/phi to one level");
  verify->add_option("--seed", cfg.seed, "seed for the random quartic-identity sampler");
  verify->add_option("--rho", cfg.rhos, "table2 rho values")->delimiter(',');
  verify->add_option("--lambda", cfg.lambdas, "table2 lambda values (default: the rho values)")->delimiter(',');

  auto* predict_cmd = app.add_subcommand("predict", "exact vs predicted coefficients for a family");
  predict_cmd->add_option("--family", cfg.name, "family name")->required();
  predict_cmd->add_option("--from", cfg.n_from, "first n");
  predict_cmd->add_option("--to", cfg.n_to, "last n");
  predict_cmd->add_option("--step", cfg.step, "n step");

  auto* gauss = app.add_subcommand("gaussian", "strong Gaussian diagnostics for a product form");
  gauss->add_option("--form", cfg.name, "form name (g needs --a --b --c)")->required();
  gauss->add_option("--a", cfg.a);
  gauss->add_option("--b", cfg.b);
  gauss->add_option("--c", cfg.c);
  gauss->add_option("--level", cfg.level, "level for jNinv or phi");
  gauss->add_option("--rho", cfg.rhos, "rho values")->delimiter(',')->required()->allow_extra_args(false);
  gauss->add_option("--points", cfg.theta_points, "theta grid points");

  auto* em = app.add_subcommand("em-check", "Euler-Maclaurin residual table");
  em->add_option("--quantity", cfg.name, "mP, sP, logP, mQ, sQ, logQ, mR, sR, logR")->required();
  em->add_option("--rho", cfg.rhos, "rho values")->delimiter(',')->required();
  em->add_option("--m", cfg.a, "m for the P quantities");
  em->add_option("--a", cfg.b, "a for the P quantities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream buf;
  int code = 0;
  try {
    if (app.count("--precision")) {
      if (cfg.precision < kMinDigits) {
        throw UsageError("--precision must be at least " + std::to_string(kMinDigits) + " digits");
      }
      set_precision(static_cast<unsigned>(cfg.precision));
    }
    if (*expand) {
      cfg.command = "expand";
      code = cmd_expand(cfg, buf);
    } else if (*verify) {
      cfg.command = "verify";
      code = cmd_verify(cfg, buf);
    } else if (*predict_cmd) {
      cfg.command = "predict";
      code = cmd_predict(cfg, buf);
    } else if (*gauss) {
      cfg.command = "gaussian";
      code = cmd_gaussian(cfg, buf);
    } else {
      cfg.command = "em-check";
      code = cmd_em(cfg, buf);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SignPatternError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (cfg.output.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << cfg.output << '\n';
      return 2;
    }
    f << buf.str();
  }
  return code;
}

}  // namespace qmod
