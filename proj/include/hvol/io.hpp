#pragma once

// JSON model and group descriptors, canonical report serialization, and profile export.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "hvol/filtration.hpp"
#include "hvol/quotient.hpp"
#include "hvol/reeb.hpp"

namespace hvol::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

[[noreturn]] inline void schema_error(const std::string& what) { throw Error(ErrorCode::kSchemaError, what); }

// ---------------------------------------------------------------------------
// canonical output

namespace detail {

inline void dump_into(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {  // std::map order: keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        dump_into(v, out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += std::isnan(x) ? "\"nan\"" : (x > 0 ? "\"inf\"" : "\"-inf\"");
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Sorted keys, two-space indent, floats with 17 significant digits; byte-identical for equal input.
inline std::string canonical_dump(const Json& j) {
  std::string out;
  detail::dump_into(j, out, 0);
  out += "\n";
  return out;
}

inline Json to_json(const Rational& q) { return to_string(q); }

inline Json to_json(const RVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

inline Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

/// Writes key as "p/q" and key_approx as a float.
inline void put_exact(Json& j, const std::string& key, const Rational& q) {
  j[key] = to_string(q);
  j[key + "_approx"] = to_double(q);
}

inline void put_exact(Json& j, const std::string& key, const ExtendedRational& q) {
  j[key] = q.str();
  j[key + "_approx"] = q.approx();
}

inline void put_exact(Json& j, const std::string& key, const RVector& v) {
  j[key] = to_json(v);
  j[key + "_approx"] = to_json(to_doubles(v));
}

// ---------------------------------------------------------------------------
// checks and reports

struct Check {
  std::string name;
  bool pass = false;
  double lhs = 0, rhs = 0, tolerance = 0;
  std::string note;
};

inline Check check_close(std::string name, double lhs, double rhs, double tol, bool relative = false) {
  const double scale = relative ? std::max(1.0, std::max(std::abs(lhs), std::abs(rhs))) : 1.0;
  return Check{std::move(name), std::abs(lhs - rhs) <= tol * scale, lhs, rhs, tol, relative ? "relative" : ""};
}

inline Check check_exact(std::string name, const Rational& lhs, const Rational& rhs) {
  return Check{std::move(name), lhs == rhs, to_double(lhs), to_double(rhs), 0, "exact: " + to_string(lhs) + " vs " + to_string(rhs)};
}

inline Check check_ge(std::string name, double lhs, double rhs, double tol) {
  return Check{std::move(name), lhs >= rhs - tol, lhs, rhs, tol, "lhs >= rhs - tolerance"};
}

inline Json to_json(const Check& c) {
  Json j{{"name", c.name}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"tolerance", c.tolerance}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline bool all_pass(const std::vector<Check>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const Check& c) { return c.pass; });
}

inline Json checks_json(const std::vector<Check>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}

inline Json error_json(const Error& e) {
  return Json{{"schema", kSchemaVersion},
              {"status", "error"},
              {"error", {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}}}};
}

// ---------------------------------------------------------------------------
// input parsing

/// Inline JSON when the text starts with '{' or '[', otherwise a file path.
inline Json load_json_arg(const std::string& arg) {
  std::string text;
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) schema_error("cannot open '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    schema_error(std::string("malformed JSON: ") + e.what());
  }
}

inline const Json& field(const Json& j, const std::string& key) {
  if (!j.is_object()) schema_error("expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error("missing field '" + key + "'");
  return *it;
}

inline int get_int(const Json& j, const std::string& key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) schema_error("field '" + key + "' must be an integer");
  return v.get<int>();
}

/// Integers or "p/q" strings; floats are rejected to keep exact inputs exact.
inline Rational get_rational(const Json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error&) {
      schema_error(what + ": cannot parse '" + v.get<std::string>() + "' as a rational");
    }
  }
  schema_error(what + " must be an integer or a \"p/q\" string");
}

inline RVector get_rvector(const Json& v, const std::string& what) {
  if (!v.is_array()) schema_error(what + " must be an array");
  RVector out;
  for (const auto& x : v) out.push_back(get_rational(x, what));
  return out;
}

inline std::vector<int> get_int_vector(const Json& v, const std::string& what) {
  if (!v.is_array()) schema_error(what + " must be an array");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) schema_error(what + " entries must be integers");
    out.push_back(x.get<int>());
  }
  return out;
}

struct ToricLogFanoModel {
  std::vector<Halfspace> facets;
  Rational r;
};

struct HypersurfaceModel {
  WeightedHomogeneousHypersurface f;
  std::optional<MonomialValuation> canonical;  // homogenizing weights when known in closed form
};

using Model = std::variant<ToricConeSingularity, HypersurfaceModel, PolarizedConeData, ToricLogFanoModel>;

inline Model parse_model(const Json& j) {
  if (!j.is_object()) schema_error("model must be a JSON object");
  if (get_int(j, "schema") != kSchemaVersion) schema_error("unsupported schema version");
  const Json& type = field(j, "type");
  if (!type.is_string()) schema_error("field 'type' must be a string");
  const std::string t = type.get<std::string>();
  const std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : t;

  if (t == "toric_cone") {
    const Json& rays = field(j, "rays");
    if (!rays.is_array() || rays.empty()) schema_error("'rays' must be a non-empty array");
    std::vector<RVector> rs;
    for (const auto& r : rays) rs.push_back(get_rvector(r, "ray"));
    try {
      return make_toric_cone(rs, label);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSchemaError) throw;
      throw Error(ErrorCode::kModelError, std::string(error_code_name(e.code())) + ": " + e.what());
    }
  }
  if (t == "hypersurface") {
    const int n = get_int(j, "n");
    const Json& mons = field(j, "monomials");
    if (!mons.is_array() || mons.empty()) schema_error("'monomials' must be a non-empty array");
    std::vector<Exponent> es;
    for (const auto& m : mons) {
      auto e = get_int_vector(m, "monomial");
      if (static_cast<int>(e.size()) != n + 1) schema_error("each monomial needs n + 1 exponents");
      es.emplace_back(e.begin(), e.end());
    }
    return HypersurfaceModel{make_hypersurface(std::move(es), label), std::nullopt};
  }
  if (t == "akm") {
    const int n = get_int(j, "n");
    const int k = get_int(j, "k");
    if (n < 2 || k < 1) throw Error(ErrorCode::kModelError, "akm needs n >= 2 and k >= 1");
    return HypersurfaceModel{akm_singularity(n, k), canonical_weights(n, k)};
  }
  if (t == "polarized_cone") {
    const int n = get_int(j, "n");
    return make_polarized_cone(n, get_rational(field(j, "r"), "r"), get_rational(field(j, "degH"), "degH"));
  }
  if (t == "toric_log_fano") {
    const Json& fs = field(j, "facets");
    if (!fs.is_array() || fs.empty()) schema_error("'facets' must be a non-empty array");
    ToricLogFanoModel m;
    for (const auto& f : fs) m.facets.push_back(make_halfspace(get_rvector(field(f, "normal"), "normal"), get_rational(field(f, "offset"), "offset")));
    m.r = get_rational(field(j, "r"), "r");
    return m;
  }
  schema_error("unknown model type '" + t + "'");
}

/// {type:"cyclic", r, a} or {type:"elements", eigs:[[p1,q1,p2,q2],...]}.
inline FiniteGroupAction parse_group(const Json& j) {
  const Json& type = field(j, "type");
  if (!type.is_string()) schema_error("field 'type' must be a string");
  const std::string t = type.get<std::string>();
  if (t == "cyclic") return cyclic_group(get_int(j, "r"), get_int(j, "a"));
  if (t == "elements") {
    const Json& eigs = field(j, "eigs");
    if (!eigs.is_array() || eigs.empty()) schema_error("'eigs' must be a non-empty array");
    std::vector<GroupElement> els;
    for (const auto& e : eigs) {
      auto v = get_int_vector(e, "eigenvalue entry");
      if (v.size() != 4 || v[1] == 0 || v[3] == 0) schema_error("each eigenvalue entry is [p1, q1, p2, q2] with q1, q2 nonzero");
      els.emplace_back(Rational(v[0], v[1]), Rational(v[2], v[3]));
    }
    std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "elements";
    try {
      return make_group(std::move(els), std::move(label));
    } catch (const Error& e) {
      throw Error(ErrorCode::kModelError, e.what());
    }
  }
  schema_error("unknown group type '" + t + "'");
}

/// Comma-separated rationals, e.g. "1,1,3/2".
inline RVector parse_weight_list(const std::string& text) {
  try {
    return parse_rvector(text);
  } catch (const Error& e) {
    schema_error(std::string("weight list: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// model echo

inline Json model_json(const Model& m) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ToricConeSingularity>) {
          Json rays = Json::array();
          for (const auto& r : x.sigma.rays) rays.push_back(to_json(r));
          Json dual = Json::array();
          for (const auto& r : x.sigma_dual.rays) dual.push_back(to_json(r));
          return Json{{"type", "toric_cone"}, {"label", x.label}, {"n", x.n}, {"rays", rays}, {"dual_rays", dual}, {"m0", to_json(x.m0)}};
        } else if constexpr (std::is_same_v<T, HypersurfaceModel>) {
          Json mons = Json::array();
          for (const auto& e : x.f.monomials) mons.push_back(Json(std::vector<int>(e.begin(), e.end())));
          return Json{{"type", "hypersurface"}, {"label", x.f.label}, {"n", x.f.n()}, {"monomials", mons}};
        } else if constexpr (std::is_same_v<T, PolarizedConeData>) {
          return Json{{"type", "polarized_cone"}, {"n", x.n}, {"r", to_json(x.r)}, {"degH", to_json(x.degH)}};
        } else {
          Json fs = Json::array();
          for (const auto& h : x.facets) fs.push_back(Json{{"normal", to_json(h.normal)}, {"offset", to_json(h.offset)}});
          return Json{{"type", "toric_log_fano"}, {"facets", fs}, {"r", to_json(x.r)}};
        }
      },
      m);
}

// ---------------------------------------------------------------------------
// result serialization

inline Json to_json(const ValuationReport& r, int n) {
  Json j;
  put_exact(j, "logdisc", r.logdisc);
  put_exact(j, "volume", r.volume);
  put_exact(j, "nvol", r.nvol);
  j["n"] = n;
  if (r.logdisc_pair) put_exact(j, "logdisc_pair", *r.logdisc_pair);
  j["nonpositive_logdisc"] = r.nonpositive_logdisc;
  return j;
}

inline Json to_json(const MinimizeResult& r) {
  Json j;
  put_exact(j, "argmin", r.argmin);
  put_exact(j, "min_nvol", r.min_nvol_exact);
  j["min_nvol_float"] = r.min_nvol;
  j["snapped"] = r.snapped;
  j["iterations"] = r.iterations;
  j["grad_norm"] = r.grad_norm;
  j["converged"] = r.converged;
  j["stop_reason"] = r.stop_reason;
  j["starts"] = r.starts;
  j["start_spread"] = r.start_spread;
  Json sa = Json::array();
  for (const auto& a : r.start_argmins) sa.push_back(to_json(a));
  j["start_argmins"] = sa;
  j["trajectory_length"] = r.trajectory.size();
  return j;
}

inline std::string trajectory_csv(const MinimizeResult& r) {
  std::string out = "step,value";
  const std::size_t d = r.trajectory.empty() ? 0 : r.trajectory.front().point.size();
  for (std::size_t i = 0; i < d; ++i) out += ",x" + std::to_string(i);
  out += "\n";
  char buf[40];
  for (std::size_t s = 0; s < r.trajectory.size(); ++s) {
    out += std::to_string(s);
    std::snprintf(buf, sizeof buf, ",%.17g", r.trajectory[s].value);
    out += buf;
    for (double x : r.trajectory[s].point) {
      std::snprintf(buf, sizeof buf, ",%.17g", x);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

inline Json to_json(const DimensionSeries& s) {
  Json a = Json::array();
  for (const auto& d : s.dims) a.push_back(d.str());
  return a;
}

inline std::string series_csv(const DimensionSeries& s) {
  std::string out = "m,d_m\n";
  for (std::size_t m = 0; m < s.dims.size(); ++m) out += std::to_string(m) + "," + s.dims[m].str() + "\n";
  return out;
}

/// Exact profile: {n, degH, c1, c2, breakpoints, pieces:[{lo, hi, coeffs}]}; sampled profiles list the table.
inline Json profile_json(const VolumeProfile& p) {
  Json j;
  j["n"] = p.n;
  put_exact(j, "degH", p.degH);
  put_exact(j, "c1", p.c1);
  put_exact(j, "c2", p.c2);
  if (p.vol_v1) put_exact(j, "vol_v1", *p.vol_v1);
  if (p.exact()) {
    j["kind"] = "piecewise";
    RVector breaks{p.c1};
    Json pieces = Json::array();
    for (const auto& q : p.pieces) {
      breaks.push_back(q.hi);
      pieces.push_back(Json{{"lo", to_json(q.lo)}, {"hi", to_json(q.hi)}, {"coeffs", to_json(q.coeffs)}});
    }
    j["breakpoints"] = to_json(breaks);
    j["pieces"] = pieces;
  } else {
    j["kind"] = "samples";
    j["t"] = to_json(p.sample_t);
    j["vol"] = to_json(p.sample_v);
  }
  return j;
}

/// Inverse of profile_json for piecewise profiles.
inline VolumeProfile profile_from_json(const Json& j) {
  VolumeProfile p;
  p.n = get_int(j, "n");
  p.degH = get_rational(field(j, "degH"), "degH");
  p.c1 = get_rational(field(j, "c1"), "c1");
  p.c2 = get_rational(field(j, "c2"), "c2");
  if (j.contains("vol_v1")) p.vol_v1 = get_rational(j["vol_v1"], "vol_v1");
  const Json& kind = field(j, "kind");
  if (kind == "piecewise") {
    p.kind = VolumeProfile::Kind::kPiecewise;
    for (const auto& q : field(j, "pieces"))
      p.pieces.push_back(PolyPiece{get_rational(field(q, "lo"), "lo"), get_rational(field(q, "hi"), "hi"), get_rvector(field(q, "coeffs"), "coeffs")});
  } else if (kind == "samples") {
    p.kind = VolumeProfile::Kind::kSamples;
    for (const auto& x : field(j, "t")) p.sample_t.push_back(x.get<double>());
    for (const auto& x : field(j, "vol")) p.sample_v.push_back(x.get<double>());
    if (p.sample_t.size() != p.sample_v.size()) schema_error("sample table columns differ in length");
  } else {
    schema_error("profile kind must be 'piecewise' or 'samples'");
  }
  return p;
}

/// t, vol_r(t), Theta(t) on `samples` equally spaced points of [0, c2 + (c2 - c1)/4].
inline std::string profile_csv(const VolumeProfile& p, int samples) {
  std::string out = "t,vol_r,theta\n";
  const double c1 = to_double(p.c1), c2 = to_double(p.c2);
  const double hi = c2 + std::max(0.25 * (c2 - c1), 0.25);
  char buf[96];
  for (int i = 0; i <= samples; ++i) {
    const double t = hi * i / samples;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, p.value(t), filtration_section_volume(p, t));
    out += buf;
  }
  return out;
}

}  // namespace hvol::io
