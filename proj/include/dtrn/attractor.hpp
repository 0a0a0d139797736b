#pragma once

// Attractor analysis. Once C stops growing every itinerary word has exactly
// one extension, so the dynamics on words is the shift; its cycles are the
// periodic itineraries, and each carries a unique candidate periodic point
// obtained in closed form from the composed affine branch. The candidate is
// then checked exactly: the orbit must realize the symbols it was derived
// from and return to its start, and its distance to the switching hyperplanes
// {x_i = T_ij} tells a robust cycle from a ghost sitting on a boundary.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "base_partition.hpp"
#include "branches.hpp"
#include "engine.hpp"
#include "network.hpp"

namespace dtrn {

struct Orbit {
  std::vector<std::vector<Rational>> points;   // x_0 .. x_T
  std::vector<unsigned long long> symbols;     // flat base atom of each point
  std::optional<std::pair<long, long>> cycle;  // (entry index, period), exact revisit
};

inline Orbit simulate_orbit(const NetworkSpec& sp, std::vector<Rational> x0, long t_max) {
  require_valid(sp);
  if (static_cast<int>(x0.size()) != sp.d) throw std::invalid_argument("simulate_orbit: bad x0");
  auto bp = base_partition(sp);
  Orbit orb;
  std::map<std::vector<Rational>, long> seen;
  std::vector<Rational> x = std::move(x0);
  for (long t = 0; t <= t_max; ++t) {
    if (sp.mode == Mode::autonomous) {
      auto [it, fresh] = seen.emplace(x, t);
      if (!fresh) {
        orb.cycle = std::make_pair(it->second, t - it->second);
        break;
      }
    }
    orb.points.push_back(x);
    orb.symbols.push_back(bp.flat_index(classify_point(bp, x)));
    if (t == t_max) break;
    const std::vector<Rational>* off = nullptr;
    if (sp.mode == Mode::sequence && sp.offsets) {
      if (t + 1 > sp.offsets->steps_available()) break;
      off = &sp.offsets->at(t + 1);
    }
    x = evaluate_map(sp, x, off);
  }
  return orb;
}

// distance from x to the nearest switching hyperplane x_i = T_ij over arrows
inline Rational distance_to_discontinuity(const NetworkSpec& sp, const std::vector<Rational>& x) {
  bool any = false;
  Rational best;
  for (int i = 0; i < sp.d; ++i)
    for (int j = 0; j < sp.d; ++j) {
      std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
      if (sp.K[ii][jj] == 0) continue;
      Rational dist = abs(x[ii] - sp.T[ii][jj]);
      if (!any || dist < best) {
        best = dist;
        any = true;
      }
    }
  if (!any) throw std::logic_error("distance_to_discontinuity: network has no arrows");
  return best;
}

struct Stabilization {
  bool stabilized = false;
  long tau = 0;  // least t with C(t+1) = C(t)
};

inline Stabilization detect_stabilization(const ComplexityTrace& trace) {
  Stabilization s;
  for (std::size_t k = 1; k < trace.C.size(); ++k)
    if (trace.C[k] == trace.C[k - 1]) {
      s.stabilized = true;
      s.tau = static_cast<long>(k);  // C[k-1] = C(k)
      return s;
    }
  return s;
}

// branch offset vector eta(b) for a flat base atom symbol
inline std::vector<Rational> branch_offsets(const NetworkSpec& sp, const BasePartition& bp,
                                            const BranchSystems& bs, unsigned long long symbol) {
  auto idx = bp.unflatten(symbol);
  std::size_t d = static_cast<std::size_t>(sp.d);
  std::vector<Rational> eta(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto& col = bs.cols[j];
    std::uint32_t mask = 0;
    for (std::size_t b = 0; b < col.in_neighbors.size(); ++b) {
      std::size_t i = static_cast<std::size_t>(col.in_neighbors[b]);
      const auto& cp = bp.coords[i];
      int pos = -1;
      for (std::size_t k = 0; k < cp.out_js.size(); ++k)
        if (cp.out_js[k] == static_cast<int>(j)) pos = static_cast<int>(k);
      std::uint32_t bit = (cp.atoms[idx[i]].sig >> pos) & 1u;
      mask |= bit << b;
    }
    eta[j] = col.offsets[col.mask_to_offset[mask]];
  }
  return eta;
}

struct CycleInfo {
  std::vector<std::uint32_t> atoms;           // word indices around the cycle
  std::vector<unsigned long long> symbols;    // periodic symbol sequence b_0..b_{p-1}
  long period = 0;
  std::vector<std::vector<Rational>> points;  // periodic orbit, one point per phase
  bool fixed_point_exact = false;  // F^p returns the computed point exactly
  bool symbols_realized = false;   // the computed orbit actually visits b_k
  bool on_discontinuity = false;
  Rational min_distance;
  Rational rotation;  // fraction of steps on the active branch (meaningful for d = 1)
};

struct AttractorReport {
  bool stabilized = false;
  long tau = 0;
  unsigned long long C_tau = 0;
  bool successor_total = false;  // the shift on length-tau words is well defined
  std::vector<std::uint32_t> successor;
  std::vector<CycleInfo> cycles;
};

inline AttractorReport attractor_report(const NetworkSpec& sp, long t_max,
                                        TraceOptions opt = {}) {
  require_valid(sp);
  if (sp.mode == Mode::sequence)
    throw std::invalid_argument("attractor_report: autonomous networks only");
  opt.t_max = t_max;
  opt.record_links = true;
  opt.numeric = NumericMode::exact;
  auto trace = complexity_trace(sp, opt);
  AttractorReport rep;
  auto st = detect_stabilization(trace);
  rep.stabilized = st.stabilized;
  rep.tau = st.tau;
  if (!st.stabilized) return rep;
  std::size_t tau = static_cast<std::size_t>(st.tau);
  rep.C_tau = trace.C[tau - 1];

  // length-tau words and their indices
  std::map<std::vector<std::uint32_t>, std::uint32_t> index_of;
  std::vector<std::vector<std::uint32_t>> words(rep.C_tau);
  for (std::uint32_t k = 0; k < rep.C_tau; ++k) {
    words[k] = trace.itinerary_of(tau, k);
    index_of.emplace(words[k], k);
  }
  // one child each; the shifted word must be realizable
  rep.successor.assign(rep.C_tau, 0);
  std::vector<unsigned> children(rep.C_tau, 0);
  rep.successor_total = trace.links.size() > tau;
  if (rep.successor_total) {
    for (const auto& link : trace.links[tau]) ++children[link.parent];
    for (unsigned c : children)
      if (c != 1) rep.successor_total = false;
  }
  if (rep.successor_total) {
    for (const auto& link : trace.links[tau]) {
      std::vector<std::uint32_t> shifted(words[link.parent].begin() + 1,
                                         words[link.parent].end());
      shifted.push_back(link.symbol);
      auto it = index_of.find(shifted);
      if (it == index_of.end()) {
        rep.successor_total = false;
        break;
      }
      rep.successor[link.parent] = it->second;
    }
  }
  if (!rep.successor_total) return rep;

  // cycles of the functional graph
  auto bp = base_partition(sp);
  auto bs = branch_systems(sp);
  std::vector<int> color(rep.C_tau, 0);  // 0 new, 1 in progress, 2 done
  for (std::uint32_t start = 0; start < rep.C_tau; ++start) {
    if (color[start]) continue;
    std::vector<std::uint32_t> path;
    std::uint32_t v = start;
    while (color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = rep.successor[v];
    }
    if (color[v] == 1) {
      // v closes a fresh cycle; extract it from the path tail
      CycleInfo ci;
      std::size_t at = path.size();
      while (at > 0 && path[at - 1] != v) --at;
      ci.atoms.assign(path.begin() + static_cast<std::ptrdiff_t>(at - 1), path.end());
      ci.period = static_cast<long>(ci.atoms.size());
      for (auto k : ci.atoms) ci.symbols.push_back(words[k][0]);

      // x_{k+1} = a x_k + (1-a) eta(b_k); solve F^p(x) = x
      std::size_t d = static_cast<std::size_t>(sp.d);
      long p = ci.period;
      std::vector<Rational> B(d);
      Rational apow = 1;  // a^{p-1-k} built backwards
      std::vector<std::vector<Rational>> etas;
      for (auto b : ci.symbols) etas.push_back(branch_offsets(sp, bp, bs, b));
      for (long k = p - 1; k >= 0; --k) {
        for (std::size_t j = 0; j < d; ++j)
          B[j] += apow * (1 - sp.a) * etas[static_cast<std::size_t>(k)][j];
        apow *= sp.a;
      }
      Rational denom = 1 - apow;  // apow = a^p now
      std::vector<Rational> x0(d);
      for (std::size_t j = 0; j < d; ++j) x0[j] = B[j] / denom;

      ci.symbols_realized = true;
      ci.points.push_back(x0);
      std::vector<Rational> x = x0;
      long active = 0;
      for (long k = 0; k < p; ++k) {
        if (bp.flat_index(classify_point(bp, x)) != ci.symbols[static_cast<std::size_t>(k)])
          ci.symbols_realized = false;
        for (int i = 0; i < sp.d; ++i)
          for (int j = 0; j < sp.d; ++j) {
            std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
            if (sp.K[ii][jj] > 0 &&
                heaviside_term(sp.s[ii][jj], x[ii], sp.T[ii][jj]) != 0) {
              ++active;
              i = sp.d;  // one count per step for the rotation fraction
              break;
            }
          }
        x = evaluate_map(sp, x);
        if (k + 1 < p) ci.points.push_back(x);
      }
      ci.fixed_point_exact = x == x0;
      ci.rotation = Rational(active) / p;
      bool any = false;
      for (const auto& pt : ci.points) {
        Rational dist = distance_to_discontinuity(sp, pt);
        if (!any || dist < ci.min_distance) {
          ci.min_distance = dist;
          any = true;
        }
      }
      ci.on_discontinuity = any && ci.min_distance == 0;
      rep.cycles.push_back(std::move(ci));
    }
    for (auto u : path) color[u] = 2;
  }
  return rep;
}

struct RotationInfo {
  Rational value;
  bool exact = false;  // from a closed orbit; otherwise a finite-horizon frequency
  long period = 0;
};

// fraction of steps spent past the threshold; intended for d = 1 loops
inline RotationInfo rotation_number(const NetworkSpec& sp, const std::vector<Rational>& x0,
                                    long t_max) {
  require_valid(sp);
  auto orb = simulate_orbit(sp, x0, t_max);
  auto active_at = [&sp](const std::vector<Rational>& x) {
    for (int i = 0; i < sp.d; ++i)
      for (int j = 0; j < sp.d; ++j) {
        std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
        if (sp.K[ii][jj] > 0 && heaviside_term(sp.s[ii][jj], x[ii], sp.T[ii][jj]) != 0)
          return true;
      }
    return false;
  };
  RotationInfo info;
  if (orb.cycle) {
    auto [entry, p] = *orb.cycle;
    long active = 0;
    for (long k = entry; k < entry + p; ++k)
      active += active_at(orb.points[static_cast<std::size_t>(k)]);
    info.value = Rational(active) / p;
    info.exact = true;
    info.period = p;
    return info;
  }
  long active = 0;
  for (const auto& pt : orb.points) active += active_at(pt);
  info.value = Rational(active) / static_cast<long>(orb.points.size());
  return info;
}

}  // namespace dtrn
