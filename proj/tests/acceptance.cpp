// Acceptance gate: one line per criterion, exit 0 only if every line passes.
// Wall-clock caps apply to the timed criteria; equalities are exact.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <dtrn/dtrn.hpp>

using namespace dtrn;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

// violation and truncation tallies across criteria 1-4, consumed by criterion 7
struct {
  unsigned long long violations = 0;
  unsigned long long truncations = 0;
  int runs = 0;
  bool complete = false;
} sweep_tally;

void tally(const ComplexityTrace& trace) {
  sweep_tally.violations += trace.violations.total();
  if (trace.truncation == Truncation::atom_cap || trace.truncation == Truncation::time_cap)
    ++sweep_tally.truncations;
  ++sweep_tally.runs;
}

ComplexityTrace run_trace(const NetworkSpec& sp, long t_max, TraceMode mode) {
  TraceOptions o;
  o.t_max = t_max;
  o.mode = mode;
  o.record_links = false;
  return complexity_trace(sp, o);
}

// both columns weighted 1/3 and 2/3; all four subset sums distinct
NetworkSpec thirds_network() {
  auto sp = make_spec(2);
  sp.a = make_rational(1, 5);
  sp.K = {{make_rational(1, 3), make_rational(1, 3)}, {make_rational(2, 3), make_rational(2, 3)}};
  sp.T = {{make_rational(1, 2), make_rational(1, 2)}, {make_rational(1, 2), make_rational(1, 2)}};
  sp.s = {{-1, +1}, {+1, -1}};
  return sp;
}

Outcome criterion_1() {
  const double cap = 10.0;
  auto t0 = Clock::now();
  std::vector<Rational> as = {make_rational(1, 10), make_rational(3, 16), make_rational(11, 40),
                              make_rational(29, 80), make_rational(9, 20)};
  std::vector<Rational> Ts = {make_rational(1, 5), make_rational(7, 20), make_rational(1, 2),
                              make_rational(13, 20), make_rational(4, 5)};
  unsigned long long worst = 0;
  int runs = 0;
  for (const auto& a : as)
    for (const auto& T : Ts) {
      auto trace = run_trace(self_inhibitor(a, T), 500, TraceMode::injective_fast);
      tally(trace);
      ++runs;
      if (trace.truncation != Truncation::none || trace.violations.total() > 0)
        return {false, "run truncated or violated at a=" + format_rational(a)};
      for (std::size_t k = 0; k < trace.C.size(); ++k) {
        if (trace.C[k] > k + 3) return {false, "C exceeded t+2 at a=" + format_rational(a)};
        worst = std::max(worst, trace.C[k]);
      }
    }
  double sec = seconds_since(t0);
  std::ostringstream d;
  d << runs << " one-loop runs to t=500, C <= t+2, max C " << worst << ", " << fmt_seconds(sec)
    << " (cap " << fmt_seconds(cap) << ")";
  return {sec < cap, d.str()};
}

Outcome criterion_2() {
  const double cap = 10.0;
  auto t0 = Clock::now();
  unsigned long long worst = 0;
  for (const auto& a : {make_rational(1, 10), make_rational(1, 4), make_rational(2, 5)}) {
    auto trace = run_trace(negative_2_circuit(a), 300, TraceMode::injective_fast);
    tally(trace);
    if (trace.truncation != Truncation::none || trace.violations.total() > 0)
      return {false, "run truncated or violated at a=" + format_rational(a)};
    for (std::size_t k = 0; k < trace.C.size(); ++k) {
      if (trace.C[k] > 2 * (k + 1) + 2) return {false, "C exceeded 2t+2 at a=" + format_rational(a)};
      worst = std::max(worst, trace.C[k]);
    }
  }
  double sec = seconds_since(t0);
  std::ostringstream d;
  d << "3 contracting loop pairs to t=300, C <= 2t+2, max C " << worst << ", " << fmt_seconds(sec)
    << " (cap " << fmt_seconds(cap) << ")";
  return {sec < cap, d.str()};
}

Outcome criterion_3() {
  const double cap = 300.0;
  auto t0 = Clock::now();
  auto trace = run_trace(negative_2_circuit(make_rational(93, 100)), 200, TraceMode::itinerary_exact);
  tally(trace);
  if (trace.truncation != Truncation::none || trace.violations.total() > 0)
    return {false, "run truncated or violated"};
  long measured = 0;
  for (std::size_t k = 1; k < trace.C.size(); ++k) {  // t = k+1 >= 2
    unsigned long long t = k + 1;
    if (trace.C[k] > 4 * t * t) return {false, "C exceeded 4t^2 at t=" + std::to_string(t)};
    ++measured;
  }
  double sec = seconds_since(t0);
  std::ostringstream d;
  d << "expansive pair to t=200 exact, C <= 4t^2 at " << measured << " steps, C(200)="
    << trace.C.back() << ", " << fmt_seconds(sec) << " (cap " << fmt_seconds(cap) << ")";
  bool pass = measured >= 100 && sec < cap;
  return {pass, d.str()};
}

Outcome criterion_4() {
  const double cap = 120.0;
  auto t0 = Clock::now();
  int bound_ok = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto sp = random_spec(seed);
    auto trace = run_trace(sp, 50, TraceMode::injective_fast);
    tally(trace);
    if (trace.violations.total() > 0)
      return {false, "violation at seed " + std::to_string(seed)};
    if (trace.truncation != Truncation::none)
      return {false, "run truncated at seed " + std::to_string(seed)};
    auto chk = verify_bound(trace.C, coarse_bound(sp));
    if (!chk.ok)
      return {false, "coarse envelope failed at seed " + std::to_string(seed) + ", t=" +
                         std::to_string(chk.first_fail)};
    ++bound_ok;
  }
  double sec = seconds_since(t0);
  std::ostringstream d;
  d << "50 seeded random networks (d <= 4, a below the margin) to t=50 under the coarse envelope, "
    << fmt_seconds(sec) << " (cap " << fmt_seconds(cap) << ")";
  bool pass = bound_ok == 50 && sec < cap;
  sweep_tally.complete = true;
  return {pass, d.str()};
}

Outcome criterion_5() {
  for (int d = 1; d <= 6; ++d) {
    std::vector<int> signs(static_cast<std::size_t>(d), -1);
    auto sp = circuit(d, signs);
    auto rep = injectivity_analysis(sp);
    if (rep.a0 != make_rational(1, 2))
      return {false, "circuit d=" + std::to_string(d) + " margin " + format_rational(rep.a0)};
    sp.a = make_rational(499, 1000);
    if (!injectivity_analysis(sp).injective_at_a)
      return {false, "circuit d=" + std::to_string(d) + " not injective below the margin"};
    sp.a = make_rational(1, 2);
    if (injectivity_analysis(sp).injective_at_a)
      return {false, "circuit d=" + std::to_string(d) + " injective at the margin"};
  }
  auto sp = thirds_network();
  auto rep = injectivity_analysis(sp);
  if (rep.a0 != make_rational(1, 4)) return {false, "thirds margin " + format_rational(rep.a0)};
  if (!rep.injective_at_a) return {false, "thirds not injective at a=1/5"};
  sp.a = make_rational(1, 4);
  if (injectivity_analysis(sp).injective_at_a) return {false, "thirds injective at the margin"};
  return {true, "margin 1/2 for feedback circuits d=1..6, margin 1/4 for weights {1/3, 2/3}"};
}

Outcome criterion_6() {
  // route one: the generation engine; route two: rectangle-by-rectangle images
  struct Case {
    NetworkSpec sp;
    long t;
    long grid_R;  // 0 = skip the grid equality
  };
  std::vector<Case> cases = {{self_inhibitor(), 12, 64},
                             {negative_2_circuit(make_rational(1, 4)), 8, 32},
                             {negative_2_circuit(make_rational(93, 100)), 8, 0}};
  for (auto& cs : cases) {
    auto trace = run_trace(cs.sp, cs.t, TraceMode::itinerary_exact);
    auto ref = oracle_run(cs.sp, cs.t);
    if (trace.C != ref.C) return {false, "engine and rectangle reference disagree"};
    auto inj = injectivity_analysis(cs.sp);
    if (inj.injective_at_a) {
      auto fast = run_trace(cs.sp, cs.t, TraceMode::injective_fast);
      if (fast.C != trace.C || fast.violations.total() > 0)
        return {false, "checked mode diverged from exact mode"};
    }
    for (long R : {3L, 5L, 8L}) {
      auto g = grid_complexity(cs.sp, cs.t, R);
      for (std::size_t k = 0; k < trace.C.size(); ++k)
        if (g.C[k] > trace.C[k]) return {false, "grid sampling exceeded the exact count"};
    }
    if (cs.grid_R > 0) {
      auto g = grid_complexity(cs.sp, cs.t, cs.grid_R);
      if (g.C != trace.C)
        return {false, "grid at R=" + std::to_string(cs.grid_R) + " missed an itinerary"};
    }
  }
  return {true, "engine = rectangle reference on 3 pinned cases; grid sampling below, equal when fine"};
}

Outcome criterion_7() {
  if (!sweep_tally.complete || sweep_tally.runs < 79)
    return {false, "criteria 1-4 did not all run"};
  std::ostringstream d;
  d << "0 invariant violations and 0 truncations across " << sweep_tally.runs
    << " runs of criteria 1-4";
  return {sweep_tally.violations == 0 && sweep_tally.truncations == 0, d.str()};
}

Outcome criterion_8() {
  auto sp2 = negative_2_circuit();
  auto red2 = certify_degree_reduction(underlying_network(sp2));
  if (red2.q != 1) return {false, "loop pair reduction gave q=" + std::to_string(red2.q)};
  auto p2 = degree_bound_params(sp2, base_partition(sp2), red2);
  if (p2.c2 != 36) return {false, "loop pair c2 = " + p2.c2.get_str()};
  auto chk2 = verify_bound(run_trace(sp2, 60, TraceMode::itinerary_exact).C, degree_bound(p2));
  if (!chk2.ok) return {false, "affine envelope failed at t=" + std::to_string(chk2.first_fail)};

  auto sp6 = disjoint_negative_2_circuits(3);
  auto red6 = certify_degree_reduction(underlying_network(sp6));
  if (red6.q != 3) return {false, "three pairs reduction gave q=" + std::to_string(red6.q)};
  auto p6 = degree_bound_params(sp6, base_partition(sp6), red6);
  if (p6.c1 != 63 || p6.c2 != 432081216)
    return {false, "three pairs constants c1=" + p6.c1.get_str() + " c2=" + p6.c2.get_str()};
  auto chk6 = verify_bound(run_trace(sp6, 60, TraceMode::itinerary_exact).C, degree_bound(p6));
  if (!chk6.ok) return {false, "cubic envelope failed at t=" + std::to_string(chk6.first_fail)};
  return {true, "degree drops to q=1 (one pair) and q=3 (three pairs), envelopes hold to t=60"};
}

Outcome criterion_9() {
  auto sp = p53_core();
  auto splits = base_bundle_splits(underlying_network(sp));
  if (splits.size() != 1) return {false, "expected exactly one base-bundle split"};
  TraceOptions o;
  o.t_max = 60;
  auto sk = skew_bound(sp, splits.front(), 60, o);
  if (!sk.base_complete) return {false, "base run truncated"};
  auto trace = run_trace(sp, 60, TraceMode::itinerary_exact);
  auto chk = verify_bound(trace.C, sk.curve);
  if (!chk.ok) return {false, "skew envelope failed at t=" + std::to_string(chk.first_fail)};
  std::ostringstream d;
  d << "four-node core under C_b(t)(4 + 27 t^2) to t=60, C(60)=" << trace.C.back()
    << ", base C(60)=" << sk.base_C.back();
  return {true, d.str()};
}

Outcome criterion_10() {
  TraceOptions o;
  auto rep1 = attractor_report(self_inhibitor(), 40, o);
  if (!rep1.stabilized || rep1.cycles.size() != 1) return {false, "one-loop attractor missing"};
  const auto& c1 = rep1.cycles[0];
  std::vector<Rational> v1 = {c1.points[0][0], c1.points[1][0]};
  std::sort(v1.begin(), v1.end());
  if (c1.period != 2 || !c1.fixed_point_exact || v1[0] != make_rational(1, 5) ||
      v1[1] != make_rational(4, 5))
    return {false, "one-loop cycle not the exact {1/5, 4/5} pair"};
  if (c1.min_distance != make_rational(3, 10) || c1.on_discontinuity)
    return {false, "one-loop cycle distance wrong"};

  auto rep2 = attractor_report(toggle_switch(), 40, o);
  if (!rep2.stabilized || rep2.cycles.size() != 3) return {false, "toggle attractors missing"};
  int fixed = 0;
  for (const auto& c : rep2.cycles) {
    if (!c.fixed_point_exact || !c.symbols_realized) return {false, "toggle cycle not exact"};
    if (c.min_distance <= 0) return {false, "toggle cycle touches a threshold"};
    if (c.period == 1) ++fixed;
  }
  if (fixed != 2) return {false, "toggle rest points missing"};
  return {true, "exact periodic points, F^p(x*) = x* with zero tolerance, threshold distance > 0"};
}

Outcome criterion_11() {
  struct Case {
    const char* name;
    NetworkSpec sp;
    long t;
  };
  std::vector<Case> cases;
  cases.push_back({"self-inhibitor", self_inhibitor(), 40});
  cases.push_back({"toggle-switch", toggle_switch(), 40});
  cases.push_back({"negative-2-circuit", negative_2_circuit(), 40});
  cases.push_back({"expansive pair", negative_2_circuit(make_rational(93, 100)), 60});
  cases.push_back({"repressilator", repressilator(), 40});
  cases.push_back({"p53-core", p53_core(), 80});
  TraceOptions o;
  for (auto& cs : cases) {
    auto rep = attractor_report(cs.sp, cs.t, o);
    if (!rep.stabilized) return {false, std::string(cs.name) + " did not stabilize"};
    if (!rep.successor_total) return {false, std::string(cs.name) + " successor not total"};
    unsigned long long covered = 0;
    for (const auto& c : rep.cycles) covered += static_cast<unsigned long long>(c.period);
    if (rep.cycles.empty() || covered > rep.C_tau)
      return {false, std::string(cs.name) + " cycle count out of range"};
  }
  return {true, "6 stabilized networks: total successor map, cycles within C(tau)"};
}

}  // namespace

int main() {
  struct Row {
    const char* name;
    Outcome (*fn)();
  };
  Row rows[] = {
      {"pinned one-loop family under t+2", criterion_1},
      {"contracting loop pairs under 2t+2", criterion_2},
      {"expansive loop pair under 4t^2", criterion_3},
      {"seeded random sweep under the coarse envelope", criterion_4},
      {"injectivity margins a0", criterion_5},
      {"dual-route agreement (engine, rectangles, grid)", criterion_6},
      {"zero violations across the sweeps", criterion_7},
      {"degree-reduced envelopes", criterion_8},
      {"slow-fast skew envelope", criterion_9},
      {"exact periodic orbits", criterion_10},
      {"stabilization yields a total successor", criterion_11},
  };
  int passed = 0, idx = 0;
  for (const auto& row : rows) {
    ++idx;
    Outcome oc;
    try {
      oc = row.fn();
    } catch (const std::exception& e) {
      oc = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%2d] %s  %-48s %s\n", idx, oc.pass ? "PASS" : "FAIL", row.name,
                oc.detail.c_str());
    if (oc.pass) ++passed;
  }
  std::printf("acceptance: %d/11 passed\n", passed);
  return passed == 11 ? 0 : 1;
}
