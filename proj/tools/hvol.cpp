// Command-line front end: compute, minimize, quotient, filtration, selftest.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hvol/hvol.hpp"

namespace {

using hvol::Error;
using hvol::ErrorCode;
using hvol::Rational;
using hvol::RVector;
using hvol::io::Check;
using hvol::io::Json;

enum ExitCode : int { kOk = 0, kCheckFailure = 2, kInputError = 3 };

struct Options {
  std::string model, valuation, init, group, v0, v1, lambda = "auto", filter, mutate, output, format = "json";
  double tol = 1e-8;
  int max_iter = 500, samples = 400, oracle_depth = 200, starts = 5, M = 400;
  std::uint64_t seed = 0;
  bool timing = false;
};

/// A finished command: the JSON report, an optional CSV rendering, and the check list.
struct Outcome {
  Json report;
  std::string csv;
  std::vector<Check> checks;
};

Json options_json(const Options& o) {
  return Json{{"tol", o.tol},         {"max_iter", o.max_iter}, {"samples", o.samples}, {"oracle_depth", o.oracle_depth},
              {"seed", o.seed},       {"starts", o.starts},     {"format", o.format}};
}

hvol::io::Model load_model(const Options& o) {
  if (o.model.empty()) hvol::io::schema_error("--model is required");
  return hvol::io::parse_model(hvol::io::load_json_arg(o.model));
}

template <class T>
const T& expect_model(const hvol::io::Model& m, const char* command) {
  if (const T* p = std::get_if<T>(&m)) return *p;
  throw Error(ErrorCode::kModelError, std::string("model type not supported by '") + command + "'");
}

// ---------------------------------------------------------------------------
// compute

Outcome compute_toric(const hvol::ToricConeSingularity& x, const Options& o) {
  const RVector xi = o.valuation.empty() ? hvol::default_init(x) : hvol::io::parse_weight_list(o.valuation);
  const auto rep = hvol::evaluate(x, xi);
  Outcome out;
  out.report["results"] = hvol::io::to_json(rep, x.n);
  out.report["inputs"]["valuation"] = hvol::io::to_json(xi);
  const Rational fan = hvol::fan_volume(x, hvol::triangulate_dual_cone(x), xi);
  out.checks.push_back(hvol::io::check_exact("cut polytope volume equals fan volume", rep.volume, fan));
  out.checks.push_back(Check{"rescaling law lambda=2", hvol::rescaling_law_check(x, xi, 2), 1, 1, 0, "exact"});
  if (o.oracle_depth > 0) {
    const double est = hvol::to_double(hvol::lattice_count_oracle_volume(x, xi, Rational(o.oracle_depth)));
    const double exact = hvol::to_double(rep.volume);
    out.checks.push_back(Check{"lattice count oracle", std::abs(est - exact) / exact <= 0.05, est, exact, 0.05, "relative"});
  }
  return out;
}

Outcome compute_hypersurface(const hvol::io::HypersurfaceModel& m, const Options& o) {
  const hvol::MonomialValuation a = o.valuation.empty() ? (m.canonical ? *m.canonical : hvol::default_init(m.f))
                                                        : hvol::MonomialValuation(hvol::io::parse_weight_list(o.valuation));
  const auto rep = hvol::evaluate(m.f, a);
  Outcome out;
  out.report["results"] = hvol::io::to_json(rep, m.f.n());
  out.report["inputs"]["valuation"] = hvol::io::to_json(a.weights());
  out.checks.push_back(Check{"rescaling law lambda=1/2", hvol::rescaling_law_check(m.f, a, Rational(1, 2)), 1, 1, 0, "exact"});
  if (o.oracle_depth > 0) {
    const double est = hvol::to_double(hvol::lattice_count_oracle_volume(m.f, a, Rational(o.oracle_depth)));
    const double exact = hvol::to_double(rep.volume);
    out.checks.push_back(Check{"lattice count oracle", std::abs(est - exact) / exact <= 0.05, est, exact, 0.05, "relative"});
  }
  return out;
}

Outcome compute_polarized(const hvol::PolarizedConeData& c) {
  const auto inv = hvol::cone_invariants(c);
  Outcome out;
  Json r;
  hvol::io::put_exact(r, "beta", inv.beta);
  hvol::io::put_exact(r, "antilog_power", inv.antilog_power);
  hvol::io::put_exact(r, "fujita_bound", inv.fujita_bound);
  hvol::io::put_exact(r, "nvol_ordV", inv.nvol_ordV);
  out.report["results"] = r;
  out.checks.push_back(hvol::io::check_exact("Fujita bound equals nvol(ord_V)", inv.fujita_bound, inv.nvol_ordV));
  return out;
}

Outcome compute_log_fano(const hvol::io::ToricLogFanoModel& m) {
  const auto rep = hvol::toric_log_fano(m.facets, m.r);
  Outcome out;
  Json r;
  hvol::io::put_exact(r, "p_star", rep.p_star);
  hvol::io::put_exact(r, "gammas", rep.gammas);
  hvol::io::put_exact(r, "lifted_centroid", rep.frak_p_star);
  hvol::io::put_exact(r, "s", rep.s);
  hvol::io::put_exact(r, "beta_i", rep.beta_i);
  hvol::io::put_exact(r, "beta_n", rep.beta_n);
  Json verts = Json::array();
  for (const auto& v : rep.lifted.vrep) verts.push_back(hvol::io::to_json(v));
  r["lifted_vertices"] = verts;
  out.report["results"] = r;
  out.checks.push_back(Check{"lifted centroid equals n/(n+1) (p*, 1)", rep.centroid_identity, 1, 1, 0, "exact"});
  out.checks.push_back(Check{"beta_n equals r/n", rep.beta_n_identity, hvol::to_double(rep.beta_n), hvol::to_double(rep.beta_n), 0, "exact"});
  return out;
}

Outcome run_compute(const Options& o) {
  const auto model = load_model(o);
  Outcome out = std::visit(
      [&](const auto& m) -> Outcome {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, hvol::ToricConeSingularity>)
          return compute_toric(m, o);
        else if constexpr (std::is_same_v<T, hvol::io::HypersurfaceModel>)
          return compute_hypersurface(m, o);
        else if constexpr (std::is_same_v<T, hvol::PolarizedConeData>)
          return compute_polarized(m);
        else
          return compute_log_fano(m);
      },
      model);
  out.report["inputs"]["model"] = hvol::io::model_json(model);
  return out;
}

// ---------------------------------------------------------------------------
// minimize

Outcome run_minimize(const Options& o) {
  const auto model = load_model(o);
  hvol::MinimizeOptions mo;
  mo.tol = o.tol;
  mo.max_iter = o.max_iter;
  mo.starts = o.starts;
  mo.seed = o.seed;
  Outcome out;
  hvol::MinimizeResult r;
  int n = 0;
  Rational logdisc;
  if (const auto* x = std::get_if<hvol::ToricConeSingularity>(&model)) {
    const RVector init = o.init.empty() ? hvol::default_init(*x) : hvol::io::parse_weight_list(o.init);
    out.report["inputs"]["init"] = hvol::io::to_json(init);
    r = hvol::minimize_nvol(*x, init, mo);
    n = x->n;
    logdisc = hvol::log_discrepancy_toric(*x, r.argmin);
  } else {
    const auto& h = expect_model<hvol::io::HypersurfaceModel>(model, "minimize");
    const hvol::MonomialValuation init =
        o.init.empty() ? hvol::default_init(h.f) : hvol::MonomialValuation(hvol::io::parse_weight_list(o.init));
    out.report["inputs"]["init"] = hvol::io::to_json(init.weights());
    r = hvol::minimize_nvol(h.f, init, mo);
    n = h.f.n();
    logdisc = hvol::log_discrepancy_hypersurface(h.f, hvol::MonomialValuation(r.argmin));
  }
  out.report["inputs"]["model"] = hvol::io::model_json(model);
  out.report["results"] = hvol::io::to_json(r);
  out.csv = hvol::io::trajectory_csv(r);
  out.checks.push_back(Check{"converged", r.converged, r.grad_norm, o.tol, o.tol, "stop reason " + r.stop_reason});
  out.checks.push_back(hvol::io::check_exact("A(argmin) = n", logdisc, n));
  if (r.starts > 1) out.checks.push_back(hvol::io::check_ge("multi-start agreement", 1e-6, r.start_spread, 0));
  return out;
}

// ---------------------------------------------------------------------------
// quotient

Outcome run_quotient(const Options& o) {
  if (o.group.empty()) hvol::io::schema_error("--group is required");
  const auto g = hvol::io::parse_group(hvol::io::load_json_arg(o.group));
  if (o.M < 1) throw Error(ErrorCode::kDomainError, "--M must be positive");
  Outcome out;
  Json in{{"label", g.label}, {"order", g.order()}};
  Json els = Json::array();
  for (const auto& e : g.elements) els.push_back(Json{hvol::to_string(e.eig1()), hvol::to_string(e.eig2())});
  in["elements"] = els;
  out.report["inputs"]["group"] = in;
  out.report["inputs"]["M"] = o.M;

  const auto series = hvol::invariant_dimension_series(g, o.M);
  Json r;
  r["order"] = g.order();
  r["free_in_codim1"] = hvol::check_free_in_codim1(g);
  r["series"] = hvol::io::to_json(series);
  out.csv = hvol::io::series_csv(series);
  if (hvol::check_free_in_codim1(g)) {
    const auto v = hvol::quotient_volume(g, o.M);
    const auto m = hvol::quotient_min_nvol(g);
    hvol::io::put_exact(r, "volume", v.exact);
    r["volume_estimate"] = v.estimate;
    hvol::io::put_exact(r, "min_nvol", m.nvol);
    hvol::io::put_exact(r, "min_logdisc", m.logdisc);
    out.checks.push_back(Check{"d_M/(M^2/2) within 2/M of 1/|G|", std::abs(v.estimate - hvol::to_double(v.exact)) <= 2.0 / o.M, v.estimate,
                               hvol::to_double(v.exact), 2.0 / o.M, ""});
    for (int mm = g.order(); mm <= std::min(60, o.M - 1); mm += g.order()) {
      const hvol::Integer lhs = series.dims[static_cast<std::size_t>(mm)] + series.dims[static_cast<std::size_t>(mm + 1)];
      const hvol::Integer rhs_num = hvol::Integer(mm + 1) * (mm + 1) + g.order() - 1;
      const bool ok = rhs_num % g.order() == 0 && lhs == rhs_num / g.order();
      out.checks.push_back(Check{"pair identity m=" + std::to_string(mm), ok, lhs.convert_to<double>(),
                                 (rhs_num / g.order()).convert_to<double>(), 0, "exact"});
    }
  } else {
    r["note"] = "group has pseudo-reflections; volume claims not evaluated";
  }
  out.report["results"] = r;
  return out;
}

// ---------------------------------------------------------------------------
// filtration

struct FiltrationSetup {
  hvol::VolumeProfile profile;
  Rational A0, A1;
  std::optional<Rational> c1_estimate;
  std::string c1_note;
};

FiltrationSetup filtration_setup(const hvol::io::Model& model, const Options& o, Json& inputs) {
  if (o.v1.empty()) hvol::io::schema_error("--v1 is required");
  FiltrationSetup s;
  if (const auto* x = std::get_if<hvol::ToricConeSingularity>(&model)) {
    const RVector xi0 = o.v0.empty() ? hvol::normalize_reeb(*x, hvol::default_init(*x)) : hvol::io::parse_weight_list(o.v0);
    const RVector xi1 = hvol::io::parse_weight_list(o.v1);
    inputs["v0"] = hvol::io::to_json(xi0);
    inputs["v1"] = hvol::io::to_json(xi1);
    s.profile = hvol::profile_from_model(*x, xi0, xi1);
    s.A0 = hvol::log_discrepancy_toric(*x, xi0);
    s.A1 = hvol::log_discrepancy_toric(*x, xi1);
    if (o.oracle_depth > 0) s.c1_estimate = hvol::estimate_c1(*x, xi0, xi1, o.oracle_depth);
    return s;
  }
  const auto& h = expect_model<hvol::io::HypersurfaceModel>(model, "filtration");
  const hvol::MonomialValuation a0 = o.v0.empty() ? (h.canonical ? *h.canonical : hvol::default_init(h.f))
                                                  : hvol::MonomialValuation(hvol::io::parse_weight_list(o.v0));
  const hvol::MonomialValuation a1(hvol::io::parse_weight_list(o.v1));
  inputs["v0"] = hvol::io::to_json(a0.weights());
  inputs["v1"] = hvol::io::to_json(a1.weights());
  s.profile = hvol::profile_from_model(h.f, a0, a1);
  s.A0 = hvol::log_discrepancy_hypersurface(h.f, a0);
  s.A1 = hvol::log_discrepancy_hypersurface(h.f, a1);
  if (o.oracle_depth > 0) {
    try {
      s.c1_estimate = hvol::estimate_c1(h.f, a0, a1, o.oracle_depth);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetExceeded) throw;
      s.c1_note = "c1 lattice estimate skipped: counting budget exceeded at this depth";
    }
  }
  return s;
}

Outcome run_filtration(const Options& o) {
  const auto model = load_model(o);
  Outcome out;
  Json inputs{{"model", hvol::io::model_json(model)}};
  auto s = filtration_setup(model, o, inputs);
  const auto& p = s.profile;
  const Rational r = s.A0;  // A(v0) = r for the canonical valuation of the cone
  double lambda = 0;
  if (o.lambda == "auto") {
    lambda = hvol::lambda_star(r, s.A1);
  } else {
    try {
      lambda = std::stod(o.lambda);
    } catch (const std::exception&) {
      hvol::io::schema_error("--lambda must be 'auto' or a number");
    }
  }
  inputs["lambda"] = o.lambda;
  out.report["inputs"] = inputs;

  Json res;
  res["profile"] = hvol::io::profile_json(p);
  res["lambda"] = lambda;
  hvol::io::put_exact(res, "logdisc_v0", s.A0);
  hvol::io::put_exact(res, "logdisc_v1", s.A1);
  const auto g = hvol::profile_integrals_exact(p);
  hvol::io::put_exact(res, "integral_theta", g.int_theta_0);
  hvol::io::put_exact(res, "theta_c1", g.theta_c1);
  const Rational delta = hvol::fujita_delta(r, p.n);
  const Rational gap = hvol::fujita_gap_exact(p, s.A1, delta, p.degH);
  hvol::io::put_exact(res, "fujita_delta", delta);
  hvol::io::put_exact(res, "fujita_gap", gap);

  std::vector<double> ss;
  for (int i = 0; i <= 20; ++i) ss.push_back(i / 20.0);
  const auto surf = hvol::phi_surface(p, {lambda}, ss);
  res["phi_s"] = hvol::io::to_json(ss);
  res["phi_values"] = hvol::io::to_json(surf.values.front());
  const auto& d = surf.derivatives.front();
  res["derivative_s0"] = Json{{"formA", d.formA}, {"formB1", d.formB1}, {"formB", d.formB}, {"formC", d.formC}};
  if (s.c1_estimate) hvol::io::put_exact(res, "c1_lattice_estimate", *s.c1_estimate);
  if (!s.c1_note.empty()) res["c1_note"] = s.c1_note;
  out.report["results"] = res;
  out.csv = hvol::io::profile_csv(p, o.samples);

  auto& cs = out.checks;
  const int n = p.n;
  cs.push_back(hvol::io::check_close("Phi(lambda,0) = degH", surf.values.front().front(), hvol::to_double(p.degH), 1e-12));
  cs.push_back(hvol::io::check_close("Phi(lambda,1) = lambda^-n vol(v1)", surf.values.front().back(), std::pow(lambda, -n) * hvol::to_double(*p.vol_v1), 1e-8));
  double worst = std::numeric_limits<double>::infinity();
  const auto& f = surf.values.front();
  for (std::size_t i = 1; i + 1 < f.size(); ++i) worst = std::min(worst, 0.5 * (f[i - 1] + f[i + 1]) - f[i]);
  cs.push_back(hvol::io::check_ge("midpoint convexity in s", worst, 0, 1e-9));
  const double scale = std::max(1.0, std::abs(d.formA));
  for (auto [name, v] : {std::pair{"formB1", d.formB1}, std::pair{"formB", d.formB}, std::pair{"formC", d.formC}})
    cs.push_back(hvol::io::check_close(std::string(name) + " agrees with formA", v, d.formA, 1e-7 * scale));
  cs.push_back(hvol::io::check_close("Theta(c1) = degH - c1^n vol(v1)", hvol::to_double(g.theta_c1),
                                     hvol::to_double(p.degH - hvol::pow(p.c1, n) * *p.vol_v1), 1e-8));
  cs.push_back(hvol::io::check_close("integral identity", hvol::to_double(g.int_vol_c1),
                                     hvol::to_double(Rational(n + 1) / n * g.int_theta_c1 + g.c1 / n * g.theta_c1), 1e-8));
  cs.push_back(hvol::io::check_close("vol(v1) from profile", hvol::volume_from_profile(p), hvol::to_double(*p.vol_v1), 1e-6, true));
  std::vector<double> xs;
  for (int i = 1; i <= 40; ++i) xs.push_back(hvol::to_double(p.c2) * i / 40.0);
  cs.push_back(Check{"pointwise Liu bound", hvol::liu_bound_check(p, xs), 1, 1, 1e-8, "40 points in (0, c2]"});
  if (o.lambda == "auto") {
    const double lhs = d.formA * hvol::to_double(s.A1);
    cs.push_back(hvol::io::check_close("derivative-gap relation", lhs, n * hvol::to_double(p.degH) * hvol::to_double(gap), 1e-7, true));
  }
  if (s.c1_estimate)
    cs.push_back(hvol::io::check_ge("lattice c1 estimate bounds c1 from above", hvol::to_double(*s.c1_estimate), hvol::to_double(p.c1), 1e-12));
  return out;
}

// ---------------------------------------------------------------------------
// selftest

Outcome run_selftest(const Options& o) {
  hvol::selftest::SuiteContext ctx;
  if (o.mutate == "volume")
    ctx = hvol::selftest::mutated_volume_context();
  else if (!o.mutate.empty())
    hvol::io::schema_error("unknown mutation '" + o.mutate + "'");
  ctx.seed = o.seed;
  const auto results = hvol::selftest::run_suite(ctx, o.filter);
  if (results.empty()) hvol::io::schema_error("filter '" + o.filter + "' selects no criterion");
  Outcome out;
  out.report["inputs"] = Json{{"filter", o.filter}, {"mutate", o.mutate}, {"seed", o.seed}};
  Json crit = Json::array();
  std::string csv = "id,name,pass,checks,failed\n";
  for (const auto& r : results) {
    crit.push_back(hvol::selftest::to_json(r, o.timing));
    out.checks.push_back(Check{"criterion " + std::to_string(r.id) + " " + r.name, r.pass(), double(r.checks.size() - r.failed_checks()),
                               double(r.checks.size()), 0, r.error});
    csv += std::to_string(r.id) + "," + r.name + "," + (r.pass() ? "true" : "false") + "," + std::to_string(r.checks.size()) + "," +
           std::to_string(r.failed_checks()) + "\n";
  }
  out.report["results"] = Json{{"criteria", crit}};
  out.csv = csv;
  return out;
}

// ---------------------------------------------------------------------------

void emit(const std::string& text, const Options& o) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw Error(ErrorCode::kSchemaError, "cannot write '" + o.output + "'");
  f << text;
}

int finish(const std::string& command, Outcome out, const Options& o, double seconds) {
  const bool ok = hvol::io::all_pass(out.checks);
  out.report["schema"] = hvol::io::kSchemaVersion;
  out.report["command"] = command;
  out.report["inputs"]["options"] = options_json(o);
  out.report["checks"] = hvol::io::checks_json(out.checks);
  out.report["status"] = ok ? "ok" : "check_failed";
  if (o.timing) out.report["timing"] = Json{{"seconds", seconds}};
  emit(o.format == "csv" ? out.csv : hvol::io::canonical_dump(out.report), o);
  return ok ? kOk : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hvol: normalized volumes of klt singularities"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Options o;
  app.add_option("--output,-o", o.output, "write the report to this path instead of stdout");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--timing", o.timing, "include wall-clock timing in the report");

  auto* compute = app.add_subcommand("compute", "A, vol and normalized volume of one valuation");
  compute->add_option("--model", o.model, "model JSON (path or inline)")->required();
  compute->add_option("--valuation", o.valuation, "weights, e.g. \"1,1,3/2\"");
  compute->add_option("--oracle-depth,--oracle_depth", o.oracle_depth, "lattice count depth p; 0 disables");

  auto* minimize = app.add_subcommand("minimize", "minimize the normalized volume over the Reeb cone or weight space");
  minimize->add_option("--model", o.model, "model JSON (path or inline)")->required();
  minimize->add_option("--init", o.init, "starting point");
  minimize->add_option("--tol", o.tol, "gradient tolerance");
  minimize->add_option("--max-iter,--max_iter", o.max_iter, "iterations per start");
  minimize->add_option("--starts", o.starts, "number of starts (first is --init)");
  minimize->add_option("--seed", o.seed, "seed for the random starts");

  auto* quotient = app.add_subcommand("quotient", "invariant dimensions and volumes of C^2/G");
  quotient->add_option("--group", o.group, "group JSON (path or inline)")->required();
  quotient->add_option("--M", o.M, "series length");

  auto* filtration = app.add_subcommand("filtration", "volume profile, Theta, Phi and the Fujita gap for v0 -> v1");
  filtration->add_option("--model", o.model, "model JSON (path or inline)")->required();
  filtration->add_option("--v0", o.v0, "weights of v0 (default: canonical)");
  filtration->add_option("--v1", o.v1, "weights of v1")->required();
  filtration->add_option("--lambda", o.lambda, "'auto' for r/A(v1) or a positive number");
  filtration->add_option("--samples", o.samples, "CSV sample count");
  filtration->add_option("--oracle-depth,--oracle_depth", o.oracle_depth, "lattice depth for the c1 estimate; 0 disables");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
  selftest->add_option("--filter", o.filter, "criterion number, tag or name substring");
  selftest->add_option("--seed", o.seed, "seed for sampled checks");
  selftest->add_option("--mutate", o.mutate, "inject a known defect ('volume') to confirm the suite detects it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cout << hvol::io::canonical_dump(hvol::io::error_json(Error(ErrorCode::kSchemaError, e.what())));
    return kInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome out;
    if (command == "compute")
      out = run_compute(o);
    else if (command == "minimize")
      out = run_minimize(o);
    else if (command == "quotient")
      out = run_quotient(o);
    else if (command == "filtration")
      out = run_filtration(o);
    else
      out = run_selftest(o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish(command, std::move(out), o, secs);
  } catch (const Error& e) {
    std::cerr << "hvol: " << e.what() << "\n";
    try {
      emit(hvol::io::canonical_dump(hvol::io::error_json(e)), o);
    } catch (const Error&) {
    }
    const bool check = e.code() == ErrorCode::kBoundViolated || e.code() == ErrorCode::kOracleDisagreement;
    return check ? kCheckFailure : kInputError;
  }
}
