#pragma once

// File formats. Network files are JSON with every number carried as a string
// token so values survive the round trip exactly; a SAX shim also captures
// raw decimal tokens of plain JSON numbers, so "a": 0.93 means 93/100, not
// the nearest double. CSV emitters are deterministic: no timings, no floats
// except in the explicitly lossy log-log view.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "attractor.hpp"
#include "bounds.hpp"
#include "engine.hpp"
#include "network.hpp"
#include "rational.hpp"

namespace dtrn {

using Json = nlohmann::ordered_json;

namespace io_detail {

// DOM builder that stores every number as its raw source token
struct RawNumberSax {
  Json root;
  std::vector<Json*> stack;
  std::string cur_key;

  Json* add(Json v) {
    if (stack.empty()) {
      root = std::move(v);
      return &root;
    }
    Json& top = *stack.back();
    if (top.is_object()) {
      top[cur_key] = std::move(v);
      return &top[cur_key];
    }
    top.push_back(std::move(v));
    return &top.back();
  }
  bool null() { return add(nullptr), true; }
  bool boolean(bool b) { return add(b), true; }
  bool number_integer(std::int64_t n) { return add(Json(std::to_string(n))), true; }
  bool number_unsigned(std::uint64_t n) { return add(Json(std::to_string(n))), true; }
  bool number_float(double, const std::string& raw) { return add(Json(raw)), true; }
  bool string(std::string& s) { return add(Json(s)), true; }
  bool binary(Json::binary_t&) { return false; }
  bool start_object(std::size_t) { return stack.push_back(add(Json::object())), true; }
  bool key(std::string& k) {
    cur_key = k;
    return true;
  }
  bool end_object() { return stack.pop_back(), true; }
  bool start_array(std::size_t) { return stack.push_back(add(Json::array())), true; }
  bool end_array() { return stack.pop_back(), true; }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) {
    throw ParseError("json error at byte " + std::to_string(pos) + ": " + ex.what());
  }
};

inline Rational rat(const Json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError(what + ": expected a number");
}

inline long integer(const Json& j, const std::string& what) {
  Rational r = rat(j, what);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p())
    throw ParseError(what + ": expected an integer");
  return r.get_num().get_si();
}

}  // namespace io_detail

inline Json parse_json_exact(const std::string& text) {
  io_detail::RawNumberSax sax;
  if (!Json::sax_parse(text, &sax)) throw ParseError("json parse failed");
  return std::move(sax.root);
}

inline NetworkSpec spec_from_json(const Json& j) {
  using io_detail::integer;
  using io_detail::rat;
  if (!j.is_object()) throw ParseError("network: expected an object");
  if (!j.contains("d")) throw ParseError("network: missing d");
  long d = integer(j.at("d"), "d");
  if (d < 1 || d > 64) throw ParseError("network: d out of range");
  auto sp = make_spec(static_cast<int>(d));
  if (j.contains("mode")) {
    auto m = j.at("mode").get<std::string>();
    if (m == "autonomous")
      sp.mode = Mode::autonomous;
    else if (m == "sequence")
      sp.mode = Mode::sequence;
    else
      throw ParseError("network: unknown mode " + m);
  }
  if (j.contains("a")) sp.a = rat(j.at("a"), "a");
  if (!j.contains("arrows") || !j.at("arrows").is_array())
    throw ParseError("network: missing arrows array");
  for (const auto& e : j.at("arrows")) {
    long from = integer(e.at("from"), "arrow from");
    long to = integer(e.at("to"), "arrow to");
    if (from < 0 || from >= d || to < 0 || to >= d)
      throw ParseError("network: arrow endpoint out of range");
    std::size_t i = static_cast<std::size_t>(from), jj = static_cast<std::size_t>(to);
    sp.K[i][jj] = rat(e.at("weight"), "arrow weight");
    sp.T[i][jj] = rat(e.at("threshold"), "arrow threshold");
    sp.s[i][jj] = static_cast<int>(integer(e.at("sign"), "arrow sign"));
  }
  if (j.contains("offsets")) {
    const auto& o = j.at("offsets");
    OffsetSequence os;
    auto rule = o.at("rule").get<std::string>();
    if (rule == "finite")
      os.rule = OffsetRule::finite;
    else if (rule == "periodic")
      os.rule = OffsetRule::periodic;
    else if (rule == "constant")
      os.rule = OffsetRule::constant;
    else
      throw ParseError("offsets: unknown rule " + rule);
    for (const auto& row : o.at("vectors")) {
      std::vector<Rational> v;
      for (const auto& x : row) v.push_back(rat(x, "offset"));
      if (static_cast<long>(v.size()) != d) throw ParseError("offsets: vector length != d");
      os.vectors.push_back(std::move(v));
    }
    if (os.vectors.empty()) throw ParseError("offsets: empty vector list");
    sp.offsets = std::move(os);
  }
  return canonicalize_spec(sp);
}

inline NetworkSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return spec_from_json(parse_json_exact(buf.str()));
}

inline Json spec_to_json(const NetworkSpec& sp) {
  Json j;
  j["d"] = std::to_string(sp.d);
  j["mode"] = sp.mode == Mode::autonomous ? "autonomous" : "sequence";
  j["a"] = format_rational(sp.a);
  Json arrows = Json::array();
  for (int i = 0; i < sp.d; ++i)
    for (int t = 0; t < sp.d; ++t) {
      std::size_t ii = static_cast<std::size_t>(i), tt = static_cast<std::size_t>(t);
      if (sp.K[ii][tt] == 0) continue;
      Json e;
      e["from"] = std::to_string(i);
      e["to"] = std::to_string(t);
      e["weight"] = format_rational(sp.K[ii][tt]);
      e["threshold"] = format_rational(sp.T[ii][tt]);
      e["sign"] = std::to_string(sp.s[ii][tt]);
      arrows.push_back(std::move(e));
    }
  j["arrows"] = std::move(arrows);
  if (sp.offsets) {
    Json o;
    switch (sp.offsets->rule) {
      case OffsetRule::finite: o["rule"] = "finite"; break;
      case OffsetRule::periodic: o["rule"] = "periodic"; break;
      case OffsetRule::constant: o["rule"] = "constant"; break;
    }
    Json rows = Json::array();
    for (const auto& v : sp.offsets->vectors) {
      Json row = Json::array();
      for (const auto& x : v) row.push_back(format_rational(x));
      rows.push_back(std::move(row));
    }
    o["vectors"] = std::move(rows);
    j["offsets"] = std::move(o);
  }
  return j;
}

inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

// ---- CSV ----------------------------------------------------------------

inline std::string trace_csv(const ComplexityTrace& trace) {
  std::ostringstream out;
  out << "t,C,branching_atoms,max_branch\n";
  for (std::size_t k = 0; k < trace.C.size(); ++k) {
    unsigned long long br = 0;
    unsigned mb = 1;
    if (k >= 1 && k - 1 < trace.steps.size()) {
      br = trace.steps[k - 1].branching_atoms;
      mb = trace.steps[k - 1].max_branch;
    }
    out << (k + 1) << ',' << trace.C[k] << ',' << br << ',' << mb << '\n';
  }
  return out.str();
}

inline std::string bound_csv(const std::vector<unsigned long long>& C, const BoundCurve& curve) {
  std::ostringstream out;
  out << "t,C,bound,ok\n";
  long to = std::min<long>(static_cast<long>(C.size()), curve.max_t());
  for (long t = 1; t <= to; ++t) {
    BigInt b = curve.eval(t);
    bool ok = to_bigint(C[static_cast<std::size_t>(t - 1)]) <= b;
    out << t << ',' << C[static_cast<std::size_t>(t - 1)] << ',' << b.get_str() << ','
        << (ok ? 1 : 0) << '\n';
  }
  return out.str();
}

inline double log10_big(const BigInt& v) {
  if (v <= 0) throw std::domain_error("log10_big: nonpositive");
  signed long e = 0;
  double m = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log10(m) + static_cast<double>(e) * std::log10(2.0);
}

inline std::string loglog_csv(const std::vector<unsigned long long>& C, const BoundCurve& curve) {
  std::ostringstream out;
  out << "log10_t,log10_C,log10_bound\n";
  char buf[96];
  long to = std::min<long>(static_cast<long>(C.size()), curve.max_t());
  for (long t = 1; t <= to; ++t) {
    double lt = std::log10(static_cast<double>(t));
    double lc = std::log10(static_cast<double>(C[static_cast<std::size_t>(t - 1)]));
    double lb = log10_big(curve.eval(t));
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", lt, lc, lb);
    out << buf;
  }
  return out.str();
}

inline std::string orbit_csv(const Orbit& orb) {
  std::ostringstream out;
  out << "t";
  std::size_t d = orb.points.empty() ? 0 : orb.points.front().size();
  for (std::size_t i = 0; i < d; ++i) out << ",x_" << (i + 1);
  out << ",atom\n";
  char buf[64];
  for (std::size_t t = 0; t < orb.points.size(); ++t) {
    out << t;
    for (std::size_t i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", to_double_nearest(orb.points[t][i]));
      out << buf;
    }
    out << ',' << orb.symbols[t] << '\n';
  }
  return out.str();
}

}  // namespace dtrn
