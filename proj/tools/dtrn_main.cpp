// Command line front end.
//
// Exit codes: 0 success, 2 invalid input (file, schema, or model rules),
// 3 invariant violation detected during a run, 4 run truncated by a cap.
// A violation wins over a truncation. Output files are deterministic: they
// carry no timings and are written atomically.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <dtrn/dtrn.hpp>

namespace {

using namespace dtrn;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitViolation = 3;
constexpr int kExitTruncated = 4;

struct SpecArgs {
  std::string network_file;
  std::string preset;
  std::string a_override;
};

void add_spec_args(CLI::App* cmd, SpecArgs& args) {
  auto* net = cmd->add_option("--network", args.network_file, "network JSON file");
  auto* pre = cmd->add_option("--preset", args.preset, "built-in network name");
  cmd->add_option("--a", args.a_override, "override the update weight (rational)");
  net->excludes(pre);
}

NetworkSpec resolve_spec(const SpecArgs& args) {
  NetworkSpec sp;
  if (!args.network_file.empty())
    sp = load_spec(args.network_file);
  else if (!args.preset.empty())
    sp = build_preset(args.preset);
  else
    throw ParseError("provide --network or --preset");
  if (!args.a_override.empty()) sp.a = parse_rational(args.a_override);
  return sp;
}

struct TraceArgs {
  long t_max = 100;
  std::string mode = "exact";
  std::string numeric = "exact";
  double eps = 1e-12;
  unsigned long long max_atoms = 1'000'000;
  double max_seconds = 0;  // 0 = unlimited
};

void add_trace_args(CLI::App* cmd, TraceArgs& args) {
  cmd->add_option("--t-max", args.t_max, "horizon in steps")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", args.mode, "exact | fast (per-step counting assertions)")
      ->check(CLI::IsMember({"exact", "fast"}));
  cmd->add_option("--numeric", args.numeric, "exact | float64")
      ->check(CLI::IsMember({"exact", "float64"}));
  cmd->add_option("--eps", args.eps, "float64 comparison tolerance");
  cmd->add_option("--max-atoms", args.max_atoms, "atom cap per generation");
  cmd->add_option("--max-seconds", args.max_seconds, "wall clock cap, 0 = none");
}

TraceOptions trace_options(const TraceArgs& args) {
  TraceOptions o;
  o.t_max = args.t_max;
  o.mode = args.mode == "fast" ? TraceMode::injective_fast : TraceMode::itinerary_exact;
  o.numeric = args.numeric == "float64" ? NumericMode::float64 : NumericMode::exact;
  o.eps = args.eps;
  o.max_atoms = args.max_atoms;
  if (args.max_seconds > 0) o.max_seconds = args.max_seconds;
  o.record_links = false;
  return o;
}

void emit(const std::string& out_file, const std::string& content) {
  if (out_file.empty())
    std::cout << content;
  else
    atomic_write(out_file, content);
}

int trace_exit(const ComplexityTrace& trace) {
  if (trace.violations.total() > 0) return kExitViolation;
  if (trace.truncation == Truncation::atom_cap || trace.truncation == Truncation::time_cap)
    return kExitTruncated;
  return kExitOk;
}

Json trace_summary(const ComplexityTrace& trace) {
  Json j;
  j["reached_t"] = trace.reached_t;
  j["C_final"] = trace.C.empty() ? 0 : trace.C.back();
  j["mode"] = trace.mode == TraceMode::injective_fast ? "fast" : "exact";
  j["numeric"] = trace.numeric == NumericMode::exact ? "exact" : "float64";
  j["certified"] = trace.certified;
  j["boundary_warnings"] = trace.boundary_warnings;
  switch (trace.truncation) {
    case Truncation::none: j["truncated"] = nullptr; break;
    case Truncation::atom_cap: j["truncated"] = "atom-cap"; break;
    case Truncation::time_cap: j["truncated"] = "time-cap"; break;
    case Truncation::offsets_exhausted: j["truncated"] = "offsets-exhausted"; break;
  }
  Json v;
  v["disjointness"] = trace.violations.disjointness;
  v["determine"] = trace.violations.determine;
  v["branching"] = trace.violations.branching;
  v["monotonic"] = trace.violations.monotonic;
  j["violations"] = std::move(v);
  j["growth_rate"] = growth_rate(trace.C);
  return j;
}

std::vector<Rational> parse_point(const std::string& text, int d) {
  std::vector<Rational> x;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!tok.empty()) x.push_back(parse_rational(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (x.empty()) x.assign(static_cast<std::size_t>(d), make_rational(1, 2));
  if (static_cast<int>(x.size()) == 1 && d > 1) x.assign(static_cast<std::size_t>(d), x[0]);
  if (static_cast<int>(x.size()) != d) throw ParseError("--x0 needs " + std::to_string(d) + " values");
  return x;
}

int run_validate(const SpecArgs& sargs) {
  auto sp = resolve_spec(sargs);
  auto violations = validate(sp);
  Json j;
  j["valid"] = violations.empty();
  Json list = Json::array();
  for (const auto& v : violations) {
    Json e;
    e["where"] = v.where;
    e["rule"] = v.rule;
    e["message"] = v.message;
    list.push_back(std::move(e));
  }
  j["violations"] = std::move(list);
  std::cout << j.dump(2) << "\n";
  return violations.empty() ? kExitOk : kExitInvalid;
}

int run_complexity(const SpecArgs& sargs, const TraceArgs& targs, const std::string& out_file,
                   bool loglog) {
  auto sp = resolve_spec(sargs);
  require_valid(sp);
  auto trace = complexity_trace(sp, trace_options(targs));
  if (loglog) {
    BoundCurve coarse = coarse_bound(sp);
    emit(out_file, loglog_csv(trace.C, coarse));
  } else {
    emit(out_file, trace_csv(trace));
  }
  std::cerr << trace_summary(trace).dump(2) << "\n";
  return trace_exit(trace);
}

int run_structure(const SpecArgs& sargs, const std::string& out_file) {
  auto sp = resolve_spec(sargs);
  require_valid(sp);
  auto bs = branch_systems(sp);
  auto inj = injectivity_analysis(sp, bs);
  auto wit = degeneracy_witness(bs);
  auto g = underlying_network(sp);
  auto red = certify_degree_reduction(g);
  auto splits = base_bundle_splits(g);
  Json j;
  j["d"] = sp.d;
  j["a"] = format_rational(sp.a);
  j["injective"] = inj.injective_at_a;
  j["a0"] = format_rational(inj.a0);
  if (inj.delta) j["min_gap"] = format_rational(*inj.delta);
  j["non_degenerate"] = !wit.has_value();
  if (wit) {
    Json w;
    w["column"] = wit->j;
    w["subset_a"] = wit->mask_a;
    w["subset_b"] = wit->mask_b;
    j["degeneracy_witness"] = std::move(w);
  }
  Json loops = Json::array();
  for (const auto& l : find_two_loops(g)) {
    Json e;
    e["driver"] = l.driver;
    e["end"] = l.end;
    loops.push_back(std::move(e));
  }
  j["isolated_2_loops"] = std::move(loops);
  Json r;
  r["removed"] = red.U;
  r["kept"] = red.W;
  r["q"] = red.q;
  r["maximal"] = red.maximal;
  r["eligible"] = inj.injective_at_a && !wit.has_value() && !red.U.empty();
  j["degree_reduction"] = std::move(r);
  Json sj = Json::array();
  for (const auto& s : splits) {
    Json e;
    e["base"] = s.base;
    e["bundle"] = s.bundle;
    sj.push_back(std::move(e));
  }
  j["base_bundle_splits"] = std::move(sj);
  auto text = j.dump(2) + "\n";
  emit(out_file, text);
  return kExitOk;
}

int run_bounds(const SpecArgs& sargs, const TraceArgs& targs, const std::string& which,
               const std::string& out_file) {
  auto sp = resolve_spec(sargs);
  require_valid(sp);
  auto opts = trace_options(targs);
  auto trace = complexity_trace(sp, opts);
  auto bp = base_partition(sp);
  BoundCurve curve;
  if (which == "coarse") {
    curve = coarse_bound(bp.total, static_cast<unsigned>(sp.d));
  } else if (which == "degree") {
    auto g = underlying_network(sp);
    auto red = certify_degree_reduction(g);
    auto inj = injectivity_analysis(sp);
    if (red.U.empty()) throw ParseError("degree bound: no certifiable 2-loops");
    if (!inj.injective_at_a) throw ParseError("degree bound: map not injective at this a");
    if (degeneracy_witness(branch_systems(sp))) throw ParseError("degree bound: degenerate branch sums");
    curve = degree_bound(degree_bound_params(sp, bp, red));
  } else if (which == "skew") {
    auto splits = base_bundle_splits(underlying_network(sp));
    if (splits.empty()) throw ParseError("skew bound: network has no proper base-bundle split");
    auto sk = skew_bound(sp, splits.front(), targs.t_max, opts);
    if (!sk.base_complete) throw ParseError("skew bound: base run truncated");
    curve = sk.curve;
  } else if (which == "neg2") {
    curve = negative_two_circuit_bound(sp.a);
  } else {
    throw ParseError("unknown bound kind " + which);
  }
  emit(out_file, bound_csv(trace.C, curve));
  auto chk = verify_bound(trace.C, curve);
  Json j = trace_summary(trace);
  j["bound"] = curve.name;
  j["bound_ok"] = chk.ok;
  if (!chk.ok) j["first_fail_t"] = chk.first_fail;
  std::cerr << j.dump(2) << "\n";
  if (trace.violations.total() > 0) return kExitViolation;
  if (!chk.ok) return kExitViolation;
  return trace_exit(trace);
}

int run_attractor(const SpecArgs& sargs, long t_max, const std::string& out_file) {
  auto sp = resolve_spec(sargs);
  require_valid(sp);
  TraceOptions opt;
  opt.record_links = true;
  auto rep = attractor_report(sp, t_max, opt);
  Json j;
  j["stabilized"] = rep.stabilized;
  if (rep.stabilized) {
    j["tau"] = rep.tau;
    j["C_tau"] = rep.C_tau;
    j["successor_total"] = rep.successor_total;
    j["cycle_count"] = rep.cycles.size();
    Json cycles = Json::array();
    for (const auto& c : rep.cycles) {
      Json e;
      e["period"] = c.period;
      e["fixed_point_exact"] = c.fixed_point_exact;
      e["symbols_realized"] = c.symbols_realized;
      e["on_discontinuity"] = c.on_discontinuity;
      e["min_distance"] = format_rational(c.min_distance);
      e["rotation"] = format_rational(c.rotation);
      Json pts = Json::array();
      for (const auto& p : c.points) {
        Json row = Json::array();
        for (const auto& x : p) row.push_back(format_rational(x));
        pts.push_back(std::move(row));
      }
      e["points"] = std::move(pts);
      cycles.push_back(std::move(e));
    }
    j["cycles"] = std::move(cycles);
  }
  auto text = j.dump(2) + "\n";
  emit(out_file, text);
  return kExitOk;
}

int run_rotation(const SpecArgs& sargs, long t_max, const std::string& x0_text,
                 const std::string& out_file) {
  auto sp = resolve_spec(sargs);
  require_valid(sp);
  auto x0 = parse_point(x0_text, sp.d);
  auto info = rotation_number(sp, x0, t_max);
  Json j;
  j["rotation"] = format_rational(info.value);
  j["exact"] = info.exact;
  if (info.exact) j["period"] = info.period;
  auto text = j.dump(2) + "\n";
  emit(out_file, text);
  return kExitOk;
}

int run_orbit(const SpecArgs& sargs, long t_max, const std::string& x0_text,
              const std::string& out_file) {
  auto sp = resolve_spec(sargs);
  require_valid(sp);
  auto x0 = parse_point(x0_text, sp.d);
  auto orb = simulate_orbit(sp, x0, t_max);
  emit(out_file, orbit_csv(orb));
  return kExitOk;
}

int run_sweep(std::uint64_t seed, int count, long t_max, const std::string& out_file) {
  std::ostringstream out;
  out << "seed,d,a,a0,C_final,bound_ok,violations,truncated\n";
  bool any_violation = false, any_trunc = false;
  for (int k = 0; k < count; ++k) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    auto sp = random_spec(s);
    auto inj = injectivity_analysis(sp);
    TraceOptions o;
    o.t_max = t_max;
    o.mode = TraceMode::injective_fast;
    o.record_links = false;
    auto trace = complexity_trace(sp, o);
    auto chk = verify_bound(trace.C, coarse_bound(sp));
    bool trunc = trace.truncation == Truncation::atom_cap || trace.truncation == Truncation::time_cap;
    any_violation = any_violation || trace.violations.total() > 0 || !chk.ok;
    any_trunc = any_trunc || trunc;
    out << s << ',' << sp.d << ',' << format_rational(sp.a) << ',' << format_rational(inj.a0)
        << ',' << (trace.C.empty() ? 0 : trace.C.back()) << ',' << (chk.ok ? 1 : 0) << ','
        << trace.violations.total() << ',' << (trunc ? 1 : 0) << '\n';
  }
  emit(out_file, out.str());
  if (any_violation) return kExitViolation;
  if (any_trunc) return kExitTruncated;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact complexity analysis of threshold regulatory network dynamics"};
  app.require_subcommand(1);

  SpecArgs sargs;
  TraceArgs targs;
  std::string out_file, bound_kind = "coarse", x0_text;
  long t_max = 100;
  bool loglog = false;
  std::uint64_t seed = 1;
  int count = 20;

  auto* v = app.add_subcommand("validate", "check a network against the model rules");
  add_spec_args(v, sargs);

  auto* c = app.add_subcommand("complexity", "count itineraries C(t) step by step");
  add_spec_args(c, sargs);
  add_trace_args(c, targs);
  c->add_option("--out", out_file, "CSV destination (stdout when absent)");
  c->add_flag("--loglog", loglog, "emit log10 columns against the coarse bound");

  auto* st = app.add_subcommand("structure", "injectivity, degeneracy, loops, splits");
  add_spec_args(st, sargs);
  st->add_option("--out", out_file, "JSON destination");

  auto* b = app.add_subcommand("bounds", "verify a complexity envelope against a run");
  add_spec_args(b, sargs);
  add_trace_args(b, targs);
  b->add_option("--bound", bound_kind, "coarse | degree | skew | neg2")
      ->check(CLI::IsMember({"coarse", "degree", "skew", "neg2"}));
  b->add_option("--out", out_file, "CSV destination");

  auto* at = app.add_subcommand("attractor", "stabilization, cycles, exact periodic points");
  add_spec_args(at, sargs);
  at->add_option("--t-max", t_max, "trace horizon")->check(CLI::PositiveNumber);
  at->add_option("--out", out_file, "JSON destination");

  auto* rot = app.add_subcommand("rotation", "active-branch frequency along an orbit");
  add_spec_args(rot, sargs);
  rot->add_option("--t-max", t_max, "orbit horizon")->check(CLI::PositiveNumber);
  rot->add_option("--x0", x0_text, "start point, comma separated rationals");
  rot->add_option("--out", out_file, "JSON destination");

  auto* orb = app.add_subcommand("orbit", "simulate one exact orbit to CSV");
  add_spec_args(orb, sargs);
  orb->add_option("--t-max", t_max, "orbit horizon")->check(CLI::PositiveNumber);
  orb->add_option("--x0", x0_text, "start point, comma separated rationals");
  orb->add_option("--out", out_file, "CSV destination");

  auto* sw = app.add_subcommand("sweep", "random instances with an injectivity margin");
  sw->add_option("--seed", seed, "base seed");
  sw->add_option("--count", count, "number of instances")->check(CLI::PositiveNumber);
  sw->add_option("--t-max", targs.t_max, "horizon per instance")->check(CLI::PositiveNumber);
  sw->add_option("--out", out_file, "CSV destination");

  CLI11_PARSE(app, argc, argv);

  try {
    if (v->parsed()) return run_validate(sargs);
    if (c->parsed()) return run_complexity(sargs, targs, out_file, loglog);
    if (st->parsed()) return run_structure(sargs, out_file);
    if (b->parsed()) return run_bounds(sargs, targs, bound_kind, out_file);
    if (at->parsed()) return run_attractor(sargs, t_max, out_file);
    if (rot->parsed()) return run_rotation(sargs, t_max, x0_text, out_file);
    if (orb->parsed()) return run_orbit(sargs, t_max, x0_text, out_file);
    if (sw->parsed()) return run_sweep(seed, count, targs.t_max, out_file);
  } catch (const ValidationError& e) {
    std::cerr << "invalid network: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const EngineError& e) {
    std::cerr << "engine: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
