#pragma once

/**
 * @file json_io.hpp
 * @brief JSON encoding of problems, certificates and verification reports.
 *
 * Polynomial: {"nvars": n, "terms": [{"exp": [..], "coef": c}, ...]} in
 * graded-lex order. Problem: {"n": n, "cone": {"type": "orthant", "n": n},
 * "field": [poly, ...]} or "A": [[..], ..] for a linear field.
 */

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "copolyap/report.hpp"
#include "copolyap/synth_core.hpp"

namespace copolyap::io {

using json = nlohmann::ordered_json;

/// Malformed input; `path` names the offending field, e.g. "field[1].terms[0].coef".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(path, "non-finite number");
  return v;
}

inline int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<int>();
}

inline json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Polynomials

inline json to_json(const Poly& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({{"exp", m.exponents}, {"coef", c}});
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

inline Poly poly_from_json(const json& j, const std::string& path, std::optional<int> expected_nvars = std::nullopt) {
  const int n = detail::integer(detail::member(j, "nvars", path), detail::join(path, "nvars"));
  if (n < 1) throw ParseError(detail::join(path, "nvars"), "must be positive");
  if (expected_nvars && n != *expected_nvars) {
    throw ParseError(detail::join(path, "nvars"), "expected " + std::to_string(*expected_nvars));
  }
  const json& terms = detail::member(j, "terms", path);
  const std::string tpath = detail::join(path, "terms");
  if (!terms.is_array()) throw ParseError(tpath, "expected an array");
  Poly p(n);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string kpath = tpath + "[" + std::to_string(k) + "]";
    const json& e = detail::member(terms[k], "exp", kpath);
    const std::string epath = kpath + ".exp";
    if (!e.is_array() || static_cast<int>(e.size()) != n) {
      throw ParseError(epath, "expected " + std::to_string(n) + " exponents");
    }
    std::vector<int> exps;
    for (std::size_t q = 0; q < e.size(); ++q) {
      const int v = detail::integer(e[q], epath + "[" + std::to_string(q) + "]");
      if (v < 0) throw ParseError(epath + "[" + std::to_string(q) + "]", "negative exponent");
      exps.push_back(v);
    }
    p.add_term(Monomial(std::move(exps)), detail::number(detail::member(terms[k], "coef", kpath), kpath + ".coef"));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Problems

inline json to_json(const ProblemSpec& problem) {
  json field = json::array();
  for (const Poly& f : problem.field()) field.push_back(to_json(f));
  return {{"n", problem.dim()}, {"cone", {{"type", "orthant"}, {"n", problem.dim()}}}, {"field", field}};
}

inline ProblemSpec problem_from_json(const json& j) {
  const int n = detail::integer(detail::member(j, "n", ""), "n");
  if (n < 2) throw ParseError("n", "must be at least 2");
  if (j.contains("cone")) {
    const json& cone = j["cone"];
    const std::string type = detail::member(cone, "type", "cone").is_string() ? cone["type"].get<std::string>() : "";
    if (type != "orthant") throw ParseError("cone.type", "only \"orthant\" is supported");
    if (cone.contains("n") && detail::integer(cone["n"], "cone.n") != n) throw ParseError("cone.n", "does not match n");
  }
  const bool has_field = j.contains("field");
  const bool has_a = j.contains("A");
  if (has_field == has_a) throw ParseError("field", "exactly one of \"field\" or \"A\" is required");
  try {
    if (has_a) {
      const json& a = j["A"];
      if (!a.is_array() || static_cast<int>(a.size()) != n) throw ParseError("A", "expected n rows");
      Matrix m(n, n);
      for (int r = 0; r < n; ++r) {
        const std::string rpath = "A[" + std::to_string(r) + "]";
        if (!a[r].is_array() || static_cast<int>(a[r].size()) != n) throw ParseError(rpath, "expected n entries");
        for (int c = 0; c < n; ++c) m(r, c) = detail::number(a[r][c], rpath + "[" + std::to_string(c) + "]");
      }
      return ProblemSpec::linear(m);
    }
    const json& field = j["field"];
    if (!field.is_array() || static_cast<int>(field.size()) != n) throw ParseError("field", "expected n components");
    VectorField f;
    for (int i = 0; i < n; ++i) f.push_back(poly_from_json(field[i], "field[" + std::to_string(i) + "]", n));
    return ProblemSpec::make(std::move(f));
  } catch (const InvalidProblemError& e) {
    throw ParseError("field", e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const CheckResult& r) {
  json j = {{"status", to_string(r.status)}, {"method", r.method}, {"param", r.param}};
  if (r.witness) {
    j["witness"] = detail::vector_to_json(*r.witness);
    j["value"] = r.witness_value;
  }
  return j;
}

inline json to_json(const PolynomialVerdict& v) {
  json j = to_json(v.combined);
  j["name"] = v.name;
  j["tensor"] = to_json(v.tensor);
  j["polya"] = to_json(v.polya);
  return j;
}

inline json to_json(const SamplingStats& s) {
  json j = {{"num_points", s.num_points},
            {"max_derivative", s.max_derivative},
            {"min_h", s.min_h},
            {"tolerance", s.tolerance}};
  if (s.max_derivative_point.size() > 0) j["max_derivative_point"] = detail::vector_to_json(s.max_derivative_point);
  if (s.violation) j["violation"] = detail::vector_to_json(*s.violation);
  return j;
}

inline json to_json(const VerificationReport& r) {
  json faces = json::array();
  for (const auto& f : r.faces) faces.push_back(to_json(f));
  json j = {{"overall", to_string(r.overall)},
            {"tolerance", r.tolerance},
            {"h", to_json(r.h)},
            {"s0", to_json(r.s0)},
            {"faces", faces}};
  if (r.sampling) j["sampling"] = to_json(*r.sampling);
  return j;
}

// ---------------------------------------------------------------------------
// Certificates

inline json to_json(const Certificate& c) {
  json j = {{"h", to_json(c.h)}, {"r", c.r}, {"method", to_string(c.method)}, {"margin", c.margin}};
  if (const auto* d = std::get_if<DiscParams>(&c.params)) {
    j["params"] = {{"level", d->level},
                   {"nominal_delta", d->nominal_delta},
                   {"diameter", d->diameter},
                   {"mode", to_string(d->mode)}};
  } else if (const auto* p = std::get_if<PolyaParams>(&c.params)) {
    j["params"] = {{"polya_degree", p->polya_degree}};
  }
  if (!c.options.empty()) j["options"] = c.options;
  if (c.report) j["report"] = to_json(*c.report);
  return j;
}

/// Parses h, r, method and params; an embedded report is ignored since
/// verification always recomputes it.
inline Certificate certificate_from_json(const json& j, std::optional<int> expected_nvars = std::nullopt) {
  Certificate c;
  c.h = poly_from_json(detail::member(j, "h", ""), "h", expected_nvars);
  c.r = j.contains("r") ? detail::integer(j["r"], "r") : 0;
  if (c.r < 0) throw ParseError("r", "must be nonnegative");
  if (j.contains("method")) {
    if (!j["method"].is_string()) throw ParseError("method", "expected a string");
    const std::string m = j["method"].get<std::string>();
    if (m == "disc") c.method = Method::Disc;
    else if (m == "polya") c.method = Method::Polya;
    else if (m == "external") c.method = Method::External;
    else throw ParseError("method", "unknown method \"" + m + "\"");
  }
  if (j.contains("margin")) c.margin = detail::number(j["margin"], "margin");
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw ParseError("params", "expected an object");
    if (c.method == Method::Disc) {
      DiscParams d;
      if (p.contains("level")) d.level = detail::integer(p["level"], "params.level");
      if (p.contains("nominal_delta")) d.nominal_delta = detail::number(p["nominal_delta"], "params.nominal_delta");
      if (p.contains("diameter")) d.diameter = detail::number(p["diameter"], "params.diameter");
      if (p.contains("mode")) {
        const std::string mode = p["mode"].is_string() ? p["mode"].get<std::string>() : "";
        if (mode == "sign_split") d.mode = FaceMode::SignSplit;
        else if (mode == "conservative") d.mode = FaceMode::Conservative;
        else throw ParseError("params.mode", "expected \"conservative\" or \"sign_split\"");
      }
      c.params = d;
    } else if (c.method == Method::Polya) {
      PolyaParams pp;
      if (p.contains("polya_degree")) pp.polya_degree = detail::integer(p["polya_degree"], "params.polya_degree");
      c.params = pp;
    }
  }
  if (j.contains("options")) {
    const json& o = j["options"];
    if (!o.is_object()) throw ParseError("options", "expected an object");
    for (const auto& [k, v] : o.items()) c.options[k] = detail::number(v, "options." + k);
  }
  try {
    if (expected_nvars) validate_certificate(c, *expected_nvars);
  } catch (const MalformedCertificateError& e) {
    const std::string msg = e.what();
    throw ParseError(msg.substr(0, msg.find(':')), msg.substr(msg.find(':') + 2));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, std::string("invalid JSON: ") + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << '\n';
}

}  // namespace copolyap::io
