#pragma once

// Arrow structure of a network: K[i][j] > 0 is an arrow i -> j. Everything
// here is purely combinatorial; eligibility of a reduction for the complexity
// bound (injectivity, non-degeneracy) is judged where the bound is assembled.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "network.hpp"

namespace dtrn {

struct UnderlyingNetwork {
  int d = 0;
  std::vector<std::vector<int>> out, in;  // sorted adjacency
  bool arrow(int i, int j) const {
    const auto& o = out[static_cast<std::size_t>(i)];
    return std::binary_search(o.begin(), o.end(), j);
  }
};

inline UnderlyingNetwork underlying_network(const NetworkSpec& sp) {
  UnderlyingNetwork g;
  g.d = sp.d;
  g.out.resize(static_cast<std::size_t>(sp.d));
  g.in.resize(static_cast<std::size_t>(sp.d));
  for (int i = 0; i < sp.d; ++i)
    for (int j = 0; j < sp.d; ++j)
      if (sp.K[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0) {
        g.out[static_cast<std::size_t>(i)].push_back(j);
        g.in[static_cast<std::size_t>(j)].push_back(i);
      }
  return g;
}

// U is head-independent when arrows leaving U end outside U and no two
// members share a head
inline bool head_independent(const UnderlyingNetwork& g, const std::vector<int>& U) {
  std::vector<char> inU(static_cast<std::size_t>(g.d), 0), used(static_cast<std::size_t>(g.d), 0);
  for (int u : U) inU[static_cast<std::size_t>(u)] = 1;
  for (int u : U)
    for (int j : g.out[static_cast<std::size_t>(u)]) {
      if (inU[static_cast<std::size_t>(j)]) return false;
      if (used[static_cast<std::size_t>(j)]) return false;
      used[static_cast<std::size_t>(j)] = 1;
    }
  return true;
}

// 2-loop driver -> end -> driver whose end has no other neighbors
struct TwoLoop {
  int driver = 0, end = 0;
};

inline std::vector<TwoLoop> find_two_loops(const UnderlyingNetwork& g) {
  std::vector<TwoLoop> loops;
  for (int j = 0; j < g.d; ++j) {
    const auto& in_j = g.in[static_cast<std::size_t>(j)];
    const auto& out_j = g.out[static_cast<std::size_t>(j)];
    if (in_j.size() != 1 || out_j.size() != 1) continue;
    int i = in_j[0];
    if (out_j[0] != i || i == j) continue;
    loops.push_back(TwoLoop{i, j});
  }
  return loops;
}

struct DegreeReduction {
  std::vector<TwoLoop> loops;
  std::vector<int> U, W;  // drivers and the rest, sorted
  unsigned q = 0;         // |W|
  bool maximal = false;   // true when the search was exhaustive
};

// choose a subset of isolated 2-loops with all vertices distinct whose driver
// set is head-independent, maximizing the number of removed coordinates
inline DegreeReduction certify_degree_reduction(const UnderlyingNetwork& g) {
  auto cands = find_two_loops(g);
  DegreeReduction best;
  std::size_t n = cands.size();
  auto finish = [&g](DegreeReduction& r) {
    std::sort(r.U.begin(), r.U.end());
    std::vector<char> inU(static_cast<std::size_t>(g.d), 0);
    for (int u : r.U) inU[static_cast<std::size_t>(u)] = 1;
    for (int v = 0; v < g.d; ++v)
      if (!inU[static_cast<std::size_t>(v)]) r.W.push_back(v);
    r.q = static_cast<unsigned>(r.W.size());
  };
  if (n <= 20) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<TwoLoop> pick;
      std::vector<char> used(static_cast<std::size_t>(g.d), 0);
      bool ok = true;
      for (std::size_t k = 0; k < n && ok; ++k) {
        if (!(mask >> k & 1)) continue;
        const auto& c = cands[k];
        if (used[static_cast<std::size_t>(c.driver)] || used[static_cast<std::size_t>(c.end)]) {
          ok = false;
          break;
        }
        used[static_cast<std::size_t>(c.driver)] = used[static_cast<std::size_t>(c.end)] = 1;
        pick.push_back(c);
      }
      if (!ok) continue;
      std::vector<int> U;
      for (const auto& c : pick) U.push_back(c.driver);
      if (!head_independent(g, U)) continue;
      if (pick.size() > best.loops.size()) {
        best = DegreeReduction{};
        best.loops = pick;
        best.U = U;
      }
    }
    best.maximal = true;
  } else {
    // greedy for very wide networks; not guaranteed maximal
    std::vector<char> used(static_cast<std::size_t>(g.d), 0);
    for (const auto& c : cands) {
      if (used[static_cast<std::size_t>(c.driver)] || used[static_cast<std::size_t>(c.end)]) continue;
      std::vector<int> U = best.U;
      U.push_back(c.driver);
      if (!head_independent(g, U)) continue;
      used[static_cast<std::size_t>(c.driver)] = used[static_cast<std::size_t>(c.end)] = 1;
      best.loops.push_back(c);
      best.U = U;
    }
    best.maximal = false;
  }
  DegreeReduction out = best;
  out.W.clear();
  finish(out);
  return out;
}

// ---- strongly connected components -------------------------------------

struct Condensation {
  std::vector<int> comp;                  // vertex -> component id
  std::vector<std::vector<int>> members;  // component -> sorted vertices
  std::vector<std::vector<int>> edges;    // component DAG, deduplicated
};

inline Condensation condensation(const UnderlyingNetwork& g) {
  int d = g.d;
  Condensation c;
  c.comp.assign(static_cast<std::size_t>(d), -1);
  std::vector<int> index(static_cast<std::size_t>(d), -1), low(static_cast<std::size_t>(d), 0);
  std::vector<char> on(static_cast<std::size_t>(d), 0);
  std::vector<int> stack;
  int next = 0, ncomp = 0;
  // iterative Tarjan: frame = (vertex, next out-edge position)
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < d; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    frames.emplace_back(root, 0);
    while (!frames.empty()) {
      auto& [v, ei] = frames.back();
      std::size_t vv = static_cast<std::size_t>(v);
      if (ei == 0) {
        index[vv] = low[vv] = next++;
        stack.push_back(v);
        on[vv] = 1;
      }
      if (ei < g.out[vv].size()) {
        int w = g.out[vv][ei++];
        std::size_t ww = static_cast<std::size_t>(w);
        if (index[ww] == -1)
          frames.emplace_back(w, 0);
        else if (on[ww])
          low[vv] = std::min(low[vv], index[ww]);
      } else {
        if (low[vv] == index[vv]) {
          c.members.emplace_back();
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on[static_cast<std::size_t>(w)] = 0;
            c.comp[static_cast<std::size_t>(w)] = ncomp;
            c.members.back().push_back(w);
          } while (w != v);
          std::sort(c.members.back().begin(), c.members.back().end());
          ++ncomp;
        }
        frames.pop_back();
        if (!frames.empty()) {
          std::size_t pp = static_cast<std::size_t>(frames.back().first);
          low[pp] = std::min(low[pp], low[vv]);
        }
      }
    }
  }
  c.edges.resize(static_cast<std::size_t>(ncomp));
  for (int i = 0; i < d; ++i)
    for (int j : g.out[static_cast<std::size_t>(i)]) {
      int a = c.comp[static_cast<std::size_t>(i)], b = c.comp[static_cast<std::size_t>(j)];
      if (a != b) c.edges[static_cast<std::size_t>(a)].push_back(b);
    }
  for (auto& e : c.edges) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }
  return c;
}

// proper splits base | bundle with no arrow from bundle into base, so the
// base coordinates run autonomously and the rest ride on top
struct BaseBundleSplit {
  std::vector<int> base, bundle;  // sorted
};

inline std::vector<BaseBundleSplit> base_bundle_splits(const UnderlyingNetwork& g,
                                                       std::size_t max_results = 64) {
  auto c = condensation(g);
  std::size_t nc = c.members.size();
  if (nc > 20) throw std::runtime_error("base_bundle_splits: too many components");
  std::vector<BaseBundleSplit> out;
  for (std::uint32_t mask = 1; mask + 1 < (1u << nc) && out.size() < max_results; ++mask) {
    // base = selected components; closed under predecessors in the DAG
    bool closed = true;
    for (std::size_t a = 0; a < nc && closed; ++a) {
      if (!(mask >> a & 1)) continue;
      for (std::size_t b = 0; b < nc && closed; ++b)
        if (!(mask >> b & 1))
          for (int e : c.edges[b])
            if (static_cast<std::size_t>(e) == a) {
              closed = false;
              break;
            }
    }
    if (!closed) continue;
    BaseBundleSplit s;
    for (std::size_t a = 0; a < nc; ++a) {
      auto& dst = (mask >> a & 1) ? s.base : s.bundle;
      dst.insert(dst.end(), c.members[a].begin(), c.members[a].end());
    }
    std::sort(s.base.begin(), s.base.end());
    std::sort(s.bundle.begin(), s.bundle.end());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace dtrn
