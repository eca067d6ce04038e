// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "strongmin/analyze.hpp"
#include "strongmin/errors.hpp"
#include "strongmin/linearize.hpp"
#include "strongmin/numkernel.hpp"
#include "strongmin/polyrat.hpp"
#include "strongmin/rng.hpp"

namespace strongmin {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "strongmin 1.0.0";

// ---------------------------------------------------------------------------
// Canonical serialization
//
// One fixed textual form per value: keys alphabetical, two space indent,
// doubles printed with 17 significant digits so a reparse restores the exact
// bit pattern.  The problem digest is taken over this form.

namespace detail {

inline void append_indent(std::string& out, int depth) {
  out.append(2 * static_cast<std::size_t>(depth), ' ');
}

inline void append_escaped(std::string& out, std::string_view s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

inline std::string format_number(const Json& j) {
  if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw InternalError("canonical_json: non-finite number");
  }
  // "-0" would reparse as the integer zero and lose the sign bit.
  if (v == 0.0 && std::signbit(v)) return "-0.0";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline bool is_primitive(const Json& j) {
  return !j.is_array() && !j.is_object();
}

// Arrays of scalars and arrays of [re, im] pairs stay on one line; anything
// deeper gets one element per line.
inline bool fits_inline(const Json& a) {
  bool all_scalars = true;
  bool all_pairs = true;
  for (const auto& e : a) {
    if (!is_primitive(e)) all_scalars = false;
    if (!(e.is_array() && e.size() == 2 && is_primitive(e[0]) &&
          is_primitive(e[1]))) {
      all_pairs = false;
    }
  }
  return all_scalars || all_pairs;
}

inline void write_value(std::string& out, const Json& j, int depth) {
  if (j.is_null()) {
    out += "null";
  } else if (j.is_boolean()) {
    out += j.get<bool>() ? "true" : "false";
  } else if (j.is_string()) {
    append_escaped(out, j.get_ref<const std::string&>());
  } else if (j.is_number()) {
    out += format_number(j);
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (fits_inline(j)) {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ", ";
        first = false;
        write_value(out, e, depth);
      }
      out += ']';
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",\n";
      first = false;
      append_indent(out, depth + 1);
      write_value(out, e, depth + 1);
    }
    out += '\n';
    append_indent(out, depth);
    out += ']';
  } else {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      append_indent(out, depth + 1);
      append_escaped(out, it.key());
      out += ": ";
      write_value(out, it.value(), depth + 1);
    }
    out += '\n';
    append_indent(out, depth);
    out += '}';
  }
}

}  // namespace detail

inline std::string canonical_json(const Json& j) {
  std::string out;
  detail::write_value(out, j, 0);
  out += '\n';
  return out;
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string to_hex16(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// Parse helpers

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
}

namespace detail {

inline const Json* find_field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

inline const Json& require_field(const Json& obj, const char* key,
                                 const std::string& where) {
  const Json* p = find_field(obj, key);
  if (p == nullptr) {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return *p;
}

inline std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

inline bool as_bool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) throw InputError(where + ": expected a boolean");
  return j.get<bool>();
}

inline double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

inline std::int64_t as_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw InputError(where + ": expected an integer");
  }
  return j.get<std::int64_t>();
}

inline std::uint64_t as_unsigned(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const std::int64_t v = j.get<std::int64_t>();
    if (v >= 0) return static_cast<std::uint64_t>(v);
  }
  throw InputError(where + ": expected a nonnegative integer");
}

inline void reject_unknown_fields(const Json& obj,
                                  std::initializer_list<const char*> known,
                                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw InputError(where + ": unknown field '" + it.key() + "'");
  }
}

}  // namespace detail

inline Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw InputError(where + ": expected a [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) {
    throw InputError(where + ": expected a matrix as a list of rows");
  }
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) return CMatrix(0, 0);
  if (!j[0].is_array()) throw InputError(where + ": rows must be lists");
  const Index cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw InputError(where + ": rows must all have the same length");
    }
    for (Index k = 0; k < cols; ++k) {
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)],
                                  where + " entry");
    }
  }
  require_finite(m, where.c_str());
  return m;
}

// A zero row count serializes as [] and loses the column count, so the
// expected shape fills it back in.
inline CMatrix matrix_from_json_shaped(const Json& j, Index rows, Index cols,
                                       const std::string& where) {
  CMatrix m = matrix_from_json(j, where);
  if (m.rows() == 0 && rows == 0) return CMatrix(0, cols);
  if (m.rows() != rows || m.cols() != cols) {
    throw InputError(where + ": expected a " + std::to_string(rows) + " x " +
                     std::to_string(cols) + " matrix");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Problem files

struct ProblemStateSpace {
  CMatrix a, e, b, c;
};

struct ProblemOptions {
  std::optional<double> tolerance;  // relative rank threshold multiplier
  std::optional<Index> k;           // moment order override for tails
  std::optional<std::uint64_t> seed;
};

// On-disk description of the input.  A strictly proper part, when present,
// is carried by exactly one of laurent_tail and state_space, and only when
// the kind is rational.
struct ProblemFile {
  std::string kind;  // "polynomial" or "rational"
  Index rows = 0;
  Index cols = 0;
  StructureTag structure = StructureTag::none;
  std::vector<CMatrix> poly_coeffs;
  std::optional<std::vector<CMatrix>> laurent_tail;
  std::optional<ProblemStateSpace> state_space;
  ProblemOptions options;

  RationalMatrix to_rational() const {
    PolyMatrix poly = PolyMatrix::make(poly_coeffs);
    if (laurent_tail.has_value()) {
      return RationalMatrix::make(std::move(poly),
                                  LaurentTail::make(*laurent_tail));
    }
    if (state_space.has_value()) {
      return RationalMatrix::make(
          std::move(poly),
          StateSpaceTriple::make(state_space->a, state_space->e,
                                 state_space->b, state_space->c));
    }
    return RationalMatrix::make(std::move(poly));
  }
};

inline ProblemFile parse_problem(const std::string& text) {
  const Json j = parse_json_text(text);
  if (!j.is_object()) throw InputError("problem: top level must be an object");
  detail::reject_unknown_fields(j,
                                {"kind", "rows", "cols", "structure",
                                 "poly_coeffs", "laurent_tail", "state_space",
                                 "options"},
                                "problem");
  ProblemFile p;
  p.kind = detail::as_string(detail::require_field(j, "kind", "problem"),
                             "problem.kind");
  if (p.kind != "polynomial" && p.kind != "rational") {
    throw InputError("problem.kind: must be 'polynomial' or 'rational'");
  }
  p.rows = detail::as_integer(detail::require_field(j, "rows", "problem"),
                              "problem.rows");
  p.cols = detail::as_integer(detail::require_field(j, "cols", "problem"),
                              "problem.cols");
  if (p.rows < 1 || p.cols < 1) {
    throw InputError("problem: rows and cols must be positive");
  }
  if (const Json* s = detail::find_field(j, "structure")) {
    const std::string name = detail::as_string(*s, "problem.structure");
    const auto tag = structure_tag_from_string(name);
    if (!tag.has_value()) {
      throw InputError("problem.structure: unknown tag '" + name + "'");
    }
    p.structure = *tag;
  }
  const Json& coeffs =
      detail::require_field(j, "poly_coeffs", "problem");
  if (!coeffs.is_array() || coeffs.empty()) {
    throw InputError("problem.poly_coeffs: expected a nonempty list");
  }
  for (std::size_t t = 0; t < coeffs.size(); ++t) {
    p.poly_coeffs.push_back(matrix_from_json_shaped(
        coeffs[t], p.rows, p.cols,
        "problem.poly_coeffs[" + std::to_string(t) + "]"));
  }
  if (const Json* tail = detail::find_field(j, "laurent_tail")) {
    if (!tail->is_array() || tail->size() < 2 || tail->size() % 2 != 0) {
      throw InputError(
          "problem.laurent_tail: block count must be even and at least two");
    }
    std::vector<CMatrix> blocks;
    for (std::size_t t = 0; t < tail->size(); ++t) {
      blocks.push_back(matrix_from_json_shaped(
          (*tail)[t], p.rows, p.cols,
          "problem.laurent_tail[" + std::to_string(t) + "]"));
    }
    p.laurent_tail = std::move(blocks);
  }
  if (const Json* ss = detail::find_field(j, "state_space")) {
    if (!ss->is_object()) {
      throw InputError("problem.state_space: expected an object");
    }
    detail::reject_unknown_fields(*ss, {"A", "E", "B", "C"},
                                  "problem.state_space");
    ProblemStateSpace triple;
    triple.a = matrix_from_json(
        detail::require_field(*ss, "A", "problem.state_space"),
        "problem.state_space.A");
    const Index q = triple.a.rows();
    if (q < 1 || triple.a.cols() != q) {
      throw InputError("problem.state_space.A: must be square and nonempty");
    }
    triple.e = matrix_from_json_shaped(
        detail::require_field(*ss, "E", "problem.state_space"), q, q,
        "problem.state_space.E");
    triple.b = matrix_from_json_shaped(
        detail::require_field(*ss, "B", "problem.state_space"), q, p.cols,
        "problem.state_space.B");
    triple.c = matrix_from_json_shaped(
        detail::require_field(*ss, "C", "problem.state_space"), p.rows, q,
        "problem.state_space.C");
    p.state_space = std::move(triple);
  }
  if (p.kind == "polynomial" &&
      (p.laurent_tail.has_value() || p.state_space.has_value())) {
    throw InputError(
        "problem: kind 'polynomial' cannot carry laurent_tail or state_space");
  }
  if (p.laurent_tail.has_value() && p.state_space.has_value()) {
    throw InputError(
        "problem: laurent_tail and state_space are mutually exclusive");
  }
  if (const Json* opts = detail::find_field(j, "options")) {
    if (!opts->is_object()) {
      throw InputError("problem.options: expected an object");
    }
    detail::reject_unknown_fields(*opts, {"tolerance", "k", "seed"},
                                  "problem.options");
    if (const Json* t = detail::find_field(*opts, "tolerance")) {
      const double v = detail::as_number(*t, "problem.options.tolerance");
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InputError("problem.options.tolerance: must be positive");
      }
      p.options.tolerance = v;
    }
    if (const Json* k = detail::find_field(*opts, "k")) {
      const std::int64_t v = detail::as_integer(*k, "problem.options.k");
      if (v < 1) throw InputError("problem.options.k: must be at least one");
      p.options.k = static_cast<Index>(v);
    }
    if (const Json* s = detail::find_field(*opts, "seed")) {
      p.options.seed = detail::as_unsigned(*s, "problem.options.seed");
    }
  }
  return p;
}

inline Json problem_to_json(const ProblemFile& p) {
  Json j = Json::object();
  j["kind"] = p.kind;
  j["rows"] = p.rows;
  j["cols"] = p.cols;
  j["structure"] = to_string(p.structure);
  Json coeffs = Json::array();
  for (const CMatrix& c : p.poly_coeffs) coeffs.push_back(matrix_to_json(c));
  j["poly_coeffs"] = std::move(coeffs);
  if (p.laurent_tail.has_value()) {
    Json tail = Json::array();
    for (const CMatrix& b : *p.laurent_tail) tail.push_back(matrix_to_json(b));
    j["laurent_tail"] = std::move(tail);
  }
  if (p.state_space.has_value()) {
    Json ss = Json::object();
    ss["A"] = matrix_to_json(p.state_space->a);
    ss["E"] = matrix_to_json(p.state_space->e);
    ss["B"] = matrix_to_json(p.state_space->b);
    ss["C"] = matrix_to_json(p.state_space->c);
    j["state_space"] = std::move(ss);
  }
  if (p.options.tolerance.has_value() || p.options.k.has_value() ||
      p.options.seed.has_value()) {
    Json o = Json::object();
    if (p.options.tolerance.has_value()) o["tolerance"] = *p.options.tolerance;
    if (p.options.k.has_value()) o["k"] = *p.options.k;
    if (p.options.seed.has_value()) o["seed"] = *p.options.seed;
    j["options"] = std::move(o);
  }
  return j;
}

inline std::string problem_digest(const ProblemFile& p) {
  return to_hex16(fnv1a64(canonical_json(problem_to_json(p))));
}

// ---------------------------------------------------------------------------
// Result files

struct ResultDiagnostics {
  Index poly_rank = -1;  // compression rank of the polynomial part, -1 if none
  Index sp_rank = -1;    // realized order of the strictly proper part
  Index k_used = 0;
  bool stabilized = true;
  bool borderline = false;
  double symmetry_defect = 0.0;
  double deflation_residual = 0.0;
  double core_symmetry_defect = 0.0;
};

// Everything cmd_linearize writes.  The eight blocks carry the certified
// pencil exactly; reassembling them reproduces it bit for bit.  The report
// is present only when the certificate passed.
struct ResultFile {
  std::string version;
  std::string digest;
  StructureTag structure = StructureTag::none;
  std::uint64_t seed = 0;
  double tolerance = 1.0;
  LinearSystemMatrix system;
  MinimalityCertificate certificate;
  ResultDiagnostics diagnostics;
  std::optional<StructuralReport> report;
};

namespace detail {

// JSON has no infinities; an unbounded margin is stored as the largest
// finite double.
inline double clamp_margin(double v) {
  return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

}  // namespace detail

inline Json certificate_to_json(const MinimalityCertificate& c) {
  Json j = Json::object();
  j["controllable_finite"] = c.controllable_finite;
  j["controllable_infinite"] = c.controllable_infinite;
  j["observable_finite"] = c.observable_finite;
  j["observable_infinite"] = c.observable_infinite;
  j["margin_controllable"] = detail::clamp_margin(c.margin_controllable);
  j["margin_observable"] = detail::clamp_margin(c.margin_observable);
  j["passed"] = c.passed();
  Json failures = Json::array();
  for (const MinimalityWitness& w : c.failures) {
    Json f = Json::object();
    f["at_infinity"] = w.at_infinity;
    f["point"] = complex_to_json(w.point);
    f["rank_found"] = w.rank_found;
    f["rank_needed"] = w.rank_needed;
    failures.push_back(std::move(f));
  }
  j["failures"] = std::move(failures);
  return j;
}

inline MinimalityCertificate certificate_from_json(const Json& j,
                                                   const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  MinimalityCertificate c;
  c.controllable_finite = detail::as_bool(
      detail::require_field(j, "controllable_finite", where), where);
  c.controllable_infinite = detail::as_bool(
      detail::require_field(j, "controllable_infinite", where), where);
  c.observable_finite = detail::as_bool(
      detail::require_field(j, "observable_finite", where), where);
  c.observable_infinite = detail::as_bool(
      detail::require_field(j, "observable_infinite", where), where);
  c.margin_controllable = detail::as_number(
      detail::require_field(j, "margin_controllable", where), where);
  c.margin_observable = detail::as_number(
      detail::require_field(j, "margin_observable", where), where);
  if (const Json* fs = detail::find_field(j, "failures")) {
    if (!fs->is_array()) throw InputError(where + ".failures: expected a list");
    for (const Json& f : *fs) {
      MinimalityWitness w;
      w.at_infinity = detail::as_bool(
          detail::require_field(f, "at_infinity", where), where);
      w.point = complex_from_json(detail::require_field(f, "point", where),
                                  where + ".failures.point");
      w.rank_found = detail::as_integer(
          detail::require_field(f, "rank_found", where), where);
      w.rank_needed = detail::as_integer(
          detail::require_field(f, "rank_needed", where), where);
      c.failures.push_back(w);
    }
  }
  return c;
}

inline Json report_to_json(const StructuralReport& r) {
  Json j = Json::object();
  j["transfer_normal_rank"] = r.transfer_normal_rank;
  j["indices_at_inf"] = r.indices_at_inf;
  j["square_regular"] = r.square_regular;
  Json eigs = Json::array();
  for (const auto& [z, mult] : r.finite_eigenvalues) {
    eigs.push_back(Json::array({complex_to_json(z), mult}));
  }
  j["finite_eigenvalues"] = std::move(eigs);
  Json audit = Json::object();
  audit["rank_l1"] = r.audit.rank_l1;
  audit["finite_pole_count"] = r.audit.finite_pole_count;
  audit["polar_degree_at_infinity"] = r.audit.polar_degree_at_infinity;
  audit["indices_at_inf"] = r.audit.indices_at_inf;
  audit["consistent"] = r.audit.consistent;
  j["audit"] = std::move(audit);
  return j;
}

inline StructuralReport report_from_json(const Json& j,
                                         const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  StructuralReport r;
  r.transfer_normal_rank = detail::as_integer(
      detail::require_field(j, "transfer_normal_rank", where), where);
  const Json& inds = detail::require_field(j, "indices_at_inf", where);
  if (!inds.is_array()) {
    throw InputError(where + ".indices_at_inf: expected a list");
  }
  for (const Json& v : inds) {
    r.indices_at_inf.push_back(static_cast<int>(
        detail::as_integer(v, where + ".indices_at_inf")));
  }
  r.square_regular = detail::as_bool(
      detail::require_field(j, "square_regular", where), where);
  const Json& eigs = detail::require_field(j, "finite_eigenvalues", where);
  if (!eigs.is_array()) {
    throw InputError(where + ".finite_eigenvalues: expected a list");
  }
  for (const Json& e : eigs) {
    if (!e.is_array() || e.size() != 2) {
      throw InputError(where + ".finite_eigenvalues: expected [point, mult]");
    }
    r.finite_eigenvalues.emplace_back(
        complex_from_json(e[0], where + ".finite_eigenvalues"),
        static_cast<int>(
            detail::as_integer(e[1], where + ".finite_eigenvalues")));
  }
  const Json& audit = detail::require_field(j, "audit", where);
  r.audit.rank_l1 = detail::as_integer(
      detail::require_field(audit, "rank_l1", where), where);
  r.audit.finite_pole_count = detail::as_integer(
      detail::require_field(audit, "finite_pole_count", where), where);
  r.audit.polar_degree_at_infinity = detail::as_integer(
      detail::require_field(audit, "polar_degree_at_infinity", where), where);
  const Json& ainds = detail::require_field(audit, "indices_at_inf", where);
  if (!ainds.is_array()) {
    throw InputError(where + ".audit.indices_at_inf: expected a list");
  }
  for (const Json& v : ainds) {
    r.audit.indices_at_inf.push_back(static_cast<int>(
        detail::as_integer(v, where + ".audit.indices_at_inf")));
  }
  r.audit.consistent = detail::as_bool(
      detail::require_field(audit, "consistent", where), where);
  return r;
}

inline Json result_to_json(const ResultFile& r) {
  Json j = Json::object();
  Json blocks = Json::object();
  blocks["A0"] = matrix_to_json(r.system.a0);
  blocks["A1"] = matrix_to_json(r.system.a1);
  blocks["B0"] = matrix_to_json(r.system.b0);
  blocks["B1"] = matrix_to_json(r.system.b1);
  blocks["C0"] = matrix_to_json(r.system.c0);
  blocks["C1"] = matrix_to_json(r.system.c1);
  blocks["D0"] = matrix_to_json(r.system.d0);
  blocks["D1"] = matrix_to_json(r.system.d1);
  j["blocks"] = std::move(blocks);
  j["state_dim"] = r.system.state_dim();
  j["certificate"] = certificate_to_json(r.certificate);
  Json d = Json::object();
  d["poly_rank"] = r.diagnostics.poly_rank;
  d["sp_rank"] = r.diagnostics.sp_rank;
  d["k_used"] = r.diagnostics.k_used;
  d["stabilized"] = r.diagnostics.stabilized;
  d["borderline"] = r.diagnostics.borderline;
  d["symmetry_defect"] = r.diagnostics.symmetry_defect;
  d["deflation_residual"] = r.diagnostics.deflation_residual;
  d["core_symmetry_defect"] = r.diagnostics.core_symmetry_defect;
  j["diagnostics"] = std::move(d);
  j["digest"] = r.digest;
  j["seed"] = r.seed;
  j["structure"] = to_string(r.structure);
  j["tolerance"] = r.tolerance;
  j["version"] = r.version;
  j["report"] = r.report.has_value() ? report_to_json(*r.report) : Json();
  return j;
}

inline ResultFile parse_result(const std::string& text) {
  const Json j = parse_json_text(text);
  if (!j.is_object()) throw InputError("result: top level must be an object");
  ResultFile r;
  const Json& blocks = detail::require_field(j, "blocks", "result");
  if (!blocks.is_object()) {
    throw InputError("result.blocks: expected an object");
  }
  const Index s = detail::as_integer(
      detail::require_field(j, "state_dim", "result"), "result.state_dim");
  if (s < 0) throw InputError("result.state_dim: must be nonnegative");
  const CMatrix d0 = matrix_from_json(
      detail::require_field(blocks, "D0", "result.blocks"),
      "result.blocks.D0");
  const Index m = d0.rows(), n = d0.cols();
  if (m < 1 || n < 1) {
    throw InputError("result.blocks.D0: transfer blocks must be nonempty");
  }
  const auto grab = [&](const char* key, Index rr, Index cc) {
    return matrix_from_json_shaped(
        detail::require_field(blocks, key, "result.blocks"), rr, cc,
        std::string("result.blocks.") + key);
  };
  r.system = LinearSystemMatrix::make(
      grab("A0", s, s), grab("A1", s, s), grab("B0", s, n), grab("B1", s, n),
      grab("C0", m, s), grab("C1", m, s), d0, grab("D1", m, n));
  r.certificate = certificate_from_json(
      detail::require_field(j, "certificate", "result"), "result.certificate");
  const Json& d = detail::require_field(j, "diagnostics", "result");
  if (!d.is_object()) {
    throw InputError("result.diagnostics: expected an object");
  }
  const std::string dw = "result.diagnostics";
  r.diagnostics.poly_rank =
      detail::as_integer(detail::require_field(d, "poly_rank", dw), dw);
  r.diagnostics.sp_rank =
      detail::as_integer(detail::require_field(d, "sp_rank", dw), dw);
  r.diagnostics.k_used =
      detail::as_integer(detail::require_field(d, "k_used", dw), dw);
  r.diagnostics.stabilized =
      detail::as_bool(detail::require_field(d, "stabilized", dw), dw);
  r.diagnostics.borderline =
      detail::as_bool(detail::require_field(d, "borderline", dw), dw);
  r.diagnostics.symmetry_defect =
      detail::as_number(detail::require_field(d, "symmetry_defect", dw), dw);
  r.diagnostics.deflation_residual = detail::as_number(
      detail::require_field(d, "deflation_residual", dw), dw);
  r.diagnostics.core_symmetry_defect = detail::as_number(
      detail::require_field(d, "core_symmetry_defect", dw), dw);
  r.digest = detail::as_string(detail::require_field(j, "digest", "result"),
                               "result.digest");
  r.seed = detail::as_unsigned(detail::require_field(j, "seed", "result"),
                               "result.seed");
  const std::string tag_name = detail::as_string(
      detail::require_field(j, "structure", "result"), "result.structure");
  const auto tag = structure_tag_from_string(tag_name);
  if (!tag.has_value()) {
    throw InputError("result.structure: unknown tag '" + tag_name + "'");
  }
  r.structure = *tag;
  r.tolerance = detail::as_number(
      detail::require_field(j, "tolerance", "result"), "result.tolerance");
  r.version = detail::as_string(detail::require_field(j, "version", "result"),
                                "result.version");
  if (const Json* rep = detail::find_field(j, "report")) {
    r.report = report_from_json(*rep, "result.report");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw InputError("failed while writing: " + path);
}

// ---------------------------------------------------------------------------
// Full pipeline from parsed problem to result: build, certify, analyze.
// Explicit arguments override the matching problem options.

inline ResultFile linearize_problem(
    const ProblemFile& prob,
    std::optional<StructureTag> structure_override = std::nullopt,
    std::optional<double> tolerance_override = std::nullopt,
    std::optional<Index> k_override = std::nullopt,
    std::optional<std::uint64_t> seed_override = std::nullopt) {
  const StructureTag tag = structure_override.value_or(prob.structure);
  const double tol_value = tolerance_override.has_value()
                               ? *tolerance_override
                               : prob.options.tolerance.value_or(1.0);
  if (!(tol_value > 0.0) || !std::isfinite(tol_value)) {
    throw InputError("linearize_problem: tolerance must be positive");
  }
  const RankTolerance tol = RankTolerance::relative(tol_value);
  const std::optional<Index> k =
      k_override.has_value() ? k_override : prob.options.k;
  const std::uint64_t seed = seed_override.has_value()
                                 ? *seed_override
                                 : prob.options.seed.value_or(0x5eedULL);

  const RationalMatrix r = prob.to_rational();
  const RationalLinearization lin = linearize_rational(r, tag, tol, k);

  ResultFile res;
  res.version = kToolVersion;
  res.digest = problem_digest(prob);
  res.structure = tag;
  res.seed = seed;
  res.tolerance = tol_value;
  res.system = lin.system;
  res.certificate = check_strong_minimality(lin.system, tol, seed);
  res.diagnostics.k_used = lin.k_used;
  res.diagnostics.borderline = lin.borderline;
  if (lin.order_selection.has_value()) {
    res.diagnostics.stabilized = lin.order_selection->stabilized;
  }
  if (lin.poly_part.has_value()) {
    res.diagnostics.poly_rank = lin.poly_part->compression.rank;
    res.diagnostics.deflation_residual = lin.poly_part->deflation_residual;
    res.diagnostics.symmetry_defect = lin.poly_part->symmetry_defect;
  }
  if (lin.sp_part.has_value()) {
    res.diagnostics.sp_rank = lin.sp_part->compression.rank;
    res.diagnostics.symmetry_defect = std::max(
        res.diagnostics.symmetry_defect, lin.sp_part->symmetry_defect);
    res.diagnostics.core_symmetry_defect = lin.sp_part->core_symmetry_defect;
  }
  if (res.certificate.passed()) {
    try {
      res.report = build_structural_report(res.system, tol, seed);
    } catch (const Error&) {
      // The blocks and certificate stay valid without a report.
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Independent re-verification of a stored result
//
// The checks mirror what the linearizer promised: a fresh minimality
// certificate on the stored blocks, and agreement between the stored pencil's
// transfer function and the problem data.  Polynomial coefficients and, for
// tail inputs, the leading moments are recovered from the transfer function
// by discrete Fourier sums on a circle enclosing the finite poles, so each
// given block is compared at its own scale.  State space parts are compared
// pointwise through their resolvent, which is exact, and their moments are
// compared up to twice the given order.

struct VerifyOutcome {
  bool digest_match = false;
  MinimalityCertificate certificate;
  double max_point_residual = 0.0;   // pointwise, exactly evaluable inputs
  double max_block_residual = 0.0;   // coefficient and moment recovery
  Index points_checked = 0;
  bool transfer_ok = false;

  bool ok() const { return certificate.passed() && transfer_ok; }
};

namespace detail {

// Growth rate of the moment sequence, used to pick a sampling circle that
// encloses the poles the data can support.
inline double tail_growth(const std::vector<CMatrix>& blocks) {
  double g = 1.0;
  double prev = 0.0;
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    const double cur = blocks[t].norm();
    if (cur > 0.0) {
      g = std::max(g, std::pow(cur, 1.0 / static_cast<double>(t + 1)));
      if (prev > 0.0) g = std::max(g, cur / prev);
    }
    prev = cur;
  }
  return g;
}

}  // namespace detail

inline VerifyOutcome verify_result(const ResultFile& res,
                                   const ProblemFile& prob,
                                   double residual_tol = 1e-8,
                                   Index points = 20) {
  VerifyOutcome out;
  out.digest_match = (res.digest == problem_digest(prob));
  const RankTolerance tol = RankTolerance::relative(res.tolerance);
  out.certificate = check_strong_minimality(res.system, tol, res.seed);

  const PolyMatrix poly = PolyMatrix::make(prob.poly_coeffs);
  std::vector<CMatrix> moments;
  if (prob.laurent_tail.has_value()) {
    moments = *prob.laurent_tail;
  } else if (prob.state_space.has_value()) {
    const auto ss =
        StateSpaceTriple::make(prob.state_space->a, prob.state_space->e,
                               prob.state_space->b, prob.state_space->c);
    moments = laurent_from_state_space(ss, 2 * ss.states() + 2).blocks;
  }

  // Laurent coefficients of the stored transfer function on a circle of
  // radius rho; aliasing decays like (pole / rho)^N.
  const Index d = poly.degree();
  const Index depth = static_cast<Index>(moments.size());
  const double rho = 4.0 * detail::tail_growth(moments);
  const Index n_samples = 8 * (d + depth + 8);
  bool sampling_failed = false;
  std::vector<CMatrix> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  for (Index i = 0; i < n_samples && !sampling_failed; ++i) {
    const double angle =
        2.0 * 3.14159265358979323846 * static_cast<double>(i) /
        static_cast<double>(n_samples);
    const Complex z = rho * Complex(std::cos(angle), std::sin(angle));
    try {
      samples.push_back(transfer_eval(res.system, z));
    } catch (const SingularityError&) {
      sampling_failed = true;  // pole on the circle, certainly a mismatch
    }
  }
  double block_res = sampling_failed
                         ? std::numeric_limits<double>::infinity()
                         : 0.0;
  if (!sampling_failed) {
    double sample_scale = 0.0;
    for (const CMatrix& s : samples) sample_scale = std::max(sample_scale, s.norm());
    const auto fourier_coeff = [&](Index power) {
      CMatrix acc = CMatrix::Zero(poly.rows, poly.cols);
      for (Index i = 0; i < n_samples; ++i) {
        const double angle =
            -2.0 * 3.14159265358979323846 * static_cast<double>(i) *
            static_cast<double>(power) / static_cast<double>(n_samples);
        acc += samples[static_cast<std::size_t>(i)] *
               Complex(std::cos(angle), std::sin(angle));
      }
      return CMatrix(acc * std::pow(rho, -static_cast<double>(power)) /
                     static_cast<double>(n_samples));
    };
    // The quadrature cannot resolve content below its own roundoff, which
    // scales with the largest sample; that floor widens the denominator so
    // genuinely tiny coefficients are not failed on noise.
    const auto compare = [&](Index power, const CMatrix& want) {
      const double quad_floor = kEps * static_cast<double>(n_samples) *
                                sample_scale *
                                std::pow(rho, -static_cast<double>(power));
      const double denom =
          std::max({1.0, want.norm(), quad_floor / residual_tol});
      const double rel = (fourier_coeff(power) - want).norm() / denom;
      block_res = std::max(block_res, rel);
    };
    for (Index t = 0; t <= d; ++t) compare(t, poly.coeff(t));
    for (Index t = 0; t < depth; ++t) {
      compare(-(t + 1), moments[static_cast<std::size_t>(t)]);
    }
  }
  out.max_block_residual = block_res;

  // Pointwise comparison where the problem data evaluates exactly.  A
  // truncated tail does not, so tail inputs rely on the moment recovery.
  bool point_ok = true;
  if (!prob.laurent_tail.has_value()) {
    const RationalMatrix r = prob.to_rational();
    Rng rng(res.seed ^ 0x7665726966ULL);
    Index checked = 0;
    int attempts = 0;
    while (checked < points && attempts < 16 * points) {
      ++attempts;
      const Complex z = rng.circle_point(1.0 + 0.2 * (attempts % 6));
      try {
        const CMatrix want = eval_rational(r, z);
        const CMatrix got = transfer_eval(res.system, z);
        const double rel =
            (got - want).norm() / std::max(1.0, want.norm());
        out.max_point_residual = std::max(out.max_point_residual, rel);
        ++checked;
      } catch (const SingularityError&) {
      } catch (const DomainError&) {
      }
    }
    out.points_checked = checked;
    point_ok = (checked == points) && (out.max_point_residual <= residual_tol);
  }
  out.transfer_ok = point_ok && (out.max_block_residual <= residual_tol);
  return out;
}

}  // namespace strongmin
