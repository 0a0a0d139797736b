#pragma once

// Forward partition engine. Generation t holds the images of the atoms of the
// t-step dynamical partition, each tagged with the base atom it sits in; one
// step maps every atom through its branch and cuts the image against the base
// partition. Each child extends its parent's itinerary by one symbol, and
// distinct itineraries are distinct atoms, so the generation size is C(t)
// whether or not the map is injective.
//
// The combinatorics are written once, generic over a number system:
//   RationalNS  exact mpq endpoints, the readable reference path
//   ScaledNS    endpoints as integers over a common per-generation denominator
//               D_t = den(a)^t * D_0, so a step is a small-multiplier integer
//               multiply-add and comparisons never canonicalize
//   FloatNS     binary64 with a comparison tolerance; near-threshold decisions
//               are counted and mark the run non-certified
//
// In injective-fast mode the per-step counting assertions run (distinct projection
// intervals pairwise disjoint per coordinate, at most one projection interval
// whose image covers each threshold); violations are counted, never silently
// dropped.

#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "base_partition.hpp"
#include "branches.hpp"
#include "interval.hpp"
#include "network.hpp"
#include "rect.hpp"

namespace dtrn {

enum class TraceMode { itinerary_exact, injective_fast };
enum class NumericMode { exact, float64 };
enum class Truncation { none, atom_cap, time_cap, offsets_exhausted };

struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TraceOptions {
  long t_max = 100;
  TraceMode mode = TraceMode::itinerary_exact;
  NumericMode numeric = NumericMode::exact;
  double eps = 1e-12;
  unsigned long long max_atoms = 1'000'000;
  double max_seconds = std::numeric_limits<double>::infinity();
  bool keep_generations = false;   // store every generation as exact atoms (small runs)
  bool record_links = true;        // parent/symbol history, needed for itineraries
  int indeg_cap = 20;
  std::vector<ExtraCut> extra_cuts;
};

struct StepStats {
  unsigned long long branching_atoms = 0;  // parents with more than one child
  unsigned max_branch = 1;
  double seconds = 0;
};

struct ViolationCounts {
  unsigned long long disjointness = 0;  // projection intervals overlapping within a coordinate
  unsigned long long determine = 0;     // threshold covered by images of distinct projections
  unsigned long long branching = 0;     // a parent with more children than #P
  unsigned long long monotonic = 0;     // C decreasing across a step
  unsigned long long total() const { return disjointness + determine + branching + monotonic; }
};

struct TraceAtom {
  Rect rect;
  std::vector<std::uint32_t> base_idx;   // per-coordinate base atom index
  std::vector<std::uint32_t> itinerary;  // symbols are flat base atom indices
};

struct Generation {
  long t = 0;
  std::vector<TraceAtom> atoms;
};

struct Link {
  std::uint32_t parent = 0, symbol = 0;
};

struct ComplexityTrace {
  std::vector<unsigned long long> C;  // C[k] = C(k+1)
  std::vector<StepStats> steps;       // steps[k]: generation k+1 -> k+2
  ViolationCounts violations;
  Truncation truncation = Truncation::none;
  long reached_t = 0;
  bool certified = true;
  unsigned long long boundary_warnings = 0;
  TraceMode mode = TraceMode::itinerary_exact;
  NumericMode numeric = NumericMode::exact;
  Generation final_gen;
  std::vector<std::vector<Link>> links;  // links[k] describes generation k+1
  std::vector<Generation> generations;   // filled when keep_generations

  std::vector<std::uint32_t> itinerary_of(std::size_t gen_t, std::size_t k) const {
    if (gen_t == 0 || gen_t > links.size()) throw std::out_of_range("itinerary_of: no such generation");
    std::vector<std::uint32_t> w(gen_t);
    std::uint32_t cur = static_cast<std::uint32_t>(k);
    for (std::size_t g = gen_t; g-- > 0;) {
      w[g] = links[g][cur].symbol;
      cur = links[g][cur].parent;
    }
    return w;
  }
};

namespace engine_detail {

// ---- number systems ----------------------------------------------------

struct RationalNS {
  using V = Rational;
  const NetworkSpec* sp = nullptr;
  const BasePartition* bp = nullptr;
  const BranchSystems* bs = nullptr;
  Rational one_minus_a;
  bool zero_a = false;
  std::vector<std::vector<V>> beff;      // beff[j][oi] = (1-a)*(eta+D_j)
  std::vector<std::vector<V>> alo, ahi;  // base atom endpoints per coordinate
  std::vector<std::vector<V>> thrv;      // out-thresholds per coordinate

  void init(const NetworkSpec& spec, const BasePartition& base, const BranchSystems& branches) {
    sp = &spec;
    bp = &base;
    bs = &branches;
    one_minus_a = 1 - spec.a;
    zero_a = spec.a == 0;
    std::size_t d = base.coords.size();
    alo.resize(d);
    ahi.resize(d);
    thrv.resize(d);
    beff.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (const auto& atom : base.coords[i].atoms) {
        alo[i].push_back(atom.iv.lo);
        ahi[i].push_back(atom.iv.hi);
      }
      thrv[i] = base.coords[i].thresholds;
    }
  }
  void begin_step(const std::vector<Rational>* D) {
    std::size_t d = alo.size();
    for (std::size_t j = 0; j < d; ++j) {
      const auto& col = bs->cols[j];
      beff[j].resize(col.offsets.size());
      for (std::size_t oi = 0; oi < col.offsets.size(); ++oi) {
        Rational eta = col.offsets[oi];
        if (D) eta += (*D)[j];
        beff[j][oi] = one_minus_a * eta;
      }
    }
  }
  void end_step() {}
  int cmp(const V& a, const V& b) const { return ExactCmp{}(a, b); }
  const V& atom_lo(std::size_t i, std::size_t k) const { return alo[i][k]; }
  const V& atom_hi(std::size_t i, std::size_t k) const { return ahi[i][k]; }
  const V& thr(std::size_t i, std::size_t k) const { return thrv[i][k]; }
  void image(V& out, const V& x, std::size_t j, std::uint32_t oi) const {
    out = sp->a * x + beff[j][oi];
  }
  bool a_is_zero() const { return zero_a; }
  Rational to_rational(const V& v) const { return v; }
  void initial_endpoints(V& lo, V& hi, std::size_t i, std::size_t k) const {
    lo = alo[i][k];
    hi = ahi[i][k];
  }
  unsigned long long warnings() const { return 0; }
};

struct ScaledNS {
  using V = BigInt;
  const NetworkSpec* sp = nullptr;
  const BasePartition* bp = nullptr;
  const BranchSystems* bs = nullptr;
  BigInt p, q, q_minus_p;   // a = p/q canonical
  BigInt D_cur, D_next;     // generation denominators
  bool zero_a = false;
  std::vector<std::vector<V>> beff;      // scaled (q-p)*(eta+D_j)*D_cur
  std::vector<std::vector<V>> alo, ahi;  // base atom endpoints at D_next scale
  std::vector<std::vector<V>> thrv;

  void init(const NetworkSpec& spec, const BasePartition& base, const BranchSystems& branches,
            const std::vector<ExtraCut>& extra, const OffsetSequence* os) {
    sp = &spec;
    bp = &base;
    bs = &branches;
    p = spec.a.get_num();
    q = spec.a.get_den();
    q_minus_p = q - p;
    zero_a = spec.a == 0;
    // D_0: lcm of every constant's denominator appearing in the run
    BigInt D0 = 1;
    auto fold = [&D0](const Rational& r) {
      BigInt den = r.get_den();
      mpz_lcm(D0.get_mpz_t(), D0.get_mpz_t(), den.get_mpz_t());
    };
    for (int i = 0; i < spec.d; ++i)
      for (int j = 0; j < spec.d; ++j) {
        fold(spec.K[i][j]);
        fold(spec.T[i][j]);
      }
    for (const auto& c : extra) fold(c.T);
    if (os)
      for (const auto& v : os->vectors)
        for (const auto& r : v) fold(r);
    D_cur = D0;
    std::size_t d = base.coords.size();
    alo.resize(d);
    ahi.resize(d);
    thrv.resize(d);
    beff.resize(d);
    rescale_boundaries(D_cur);
  }
  // value*scale is exact: every denominator divides D_0 | scale
  static V scaled(const Rational& r, const BigInt& scale) {
    BigInt t;
    mpz_divexact(t.get_mpz_t(), scale.get_mpz_t(), r.get_den().get_mpz_t());
    t *= r.get_num();
    return t;
  }
  void rescale_boundaries(const BigInt& scale) {
    std::size_t d = bp->coords.size();
    for (std::size_t i = 0; i < d; ++i) {
      const auto& cp = bp->coords[i];
      alo[i].resize(cp.atoms.size());
      ahi[i].resize(cp.atoms.size());
      thrv[i].resize(cp.thresholds.size());
      for (std::size_t k = 0; k < cp.atoms.size(); ++k) {
        alo[i][k] = scaled(cp.atoms[k].iv.lo, scale);
        ahi[i][k] = scaled(cp.atoms[k].iv.hi, scale);
      }
      for (std::size_t k = 0; k < cp.thresholds.size(); ++k)
        thrv[i][k] = scaled(cp.thresholds[k], scale);
    }
  }
  void begin_step(const std::vector<Rational>* D) {
    D_next = q * D_cur;
    rescale_boundaries(D_next);
    std::size_t d = alo.size();
    for (std::size_t j = 0; j < d; ++j) {
      const auto& col = bs->cols[j];
      beff[j].resize(col.offsets.size());
      for (std::size_t oi = 0; oi < col.offsets.size(); ++oi) {
        Rational eta = col.offsets[oi];
        if (D) eta += (*D)[j];
        beff[j][oi] = q_minus_p * scaled(eta, D_cur);
      }
    }
  }
  void end_step() { mpz_swap(D_cur.get_mpz_t(), D_next.get_mpz_t()); }
  int cmp(const V& a, const V& b) const { return mpz_cmp(a.get_mpz_t(), b.get_mpz_t()); }
  const V& atom_lo(std::size_t i, std::size_t k) const { return alo[i][k]; }
  const V& atom_hi(std::size_t i, std::size_t k) const { return ahi[i][k]; }
  const V& thr(std::size_t i, std::size_t k) const { return thrv[i][k]; }
  void image(V& out, const V& x, std::size_t j, std::uint32_t oi) const {
    mpz_mul(out.get_mpz_t(), p.get_mpz_t(), x.get_mpz_t());
    mpz_add(out.get_mpz_t(), out.get_mpz_t(), beff[j][oi].get_mpz_t());
  }
  bool a_is_zero() const { return zero_a; }
  Rational to_rational(const V& v) const {
    Rational r(v);
    r /= Rational(D_cur);
    r.canonicalize();
    return r;
  }
  void initial_endpoints(V& lo, V& hi, std::size_t i, std::size_t k) const {
    lo = alo[i][k];
    hi = ahi[i][k];
  }
  unsigned long long warnings() const { return 0; }
};

struct FloatNS {
  using V = double;
  const NetworkSpec* sp = nullptr;
  const BasePartition* bp = nullptr;
  const BranchSystems* bs = nullptr;
  double a = 0, one_minus_a = 1, eps = 1e-12;
  bool zero_a = false;
  mutable unsigned long long warned = 0;
  std::vector<std::vector<V>> beff, alo, ahi, thrv;
  std::vector<std::vector<double>> offsets_f;  // column offsets as doubles

  void init(const NetworkSpec& spec, const BasePartition& base, const BranchSystems& branches,
            double eps_in) {
    sp = &spec;
    bp = &base;
    bs = &branches;
    eps = eps_in;
    a = to_double_nearest(spec.a);
    one_minus_a = 1.0 - a;
    zero_a = spec.a == 0;
    std::size_t d = base.coords.size();
    alo.resize(d);
    ahi.resize(d);
    thrv.resize(d);
    beff.resize(d);
    offsets_f.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (const auto& atom : base.coords[i].atoms) {
        alo[i].push_back(to_double_nearest(atom.iv.lo));
        ahi[i].push_back(to_double_nearest(atom.iv.hi));
      }
      for (const auto& t : base.coords[i].thresholds) thrv[i].push_back(to_double_nearest(t));
      for (const auto& o : branches.cols[i].offsets) offsets_f[i].push_back(to_double_nearest(o));
    }
  }
  void begin_step(const std::vector<Rational>* D) {
    std::size_t d = alo.size();
    for (std::size_t j = 0; j < d; ++j) {
      beff[j].resize(offsets_f[j].size());
      for (std::size_t oi = 0; oi < offsets_f[j].size(); ++oi) {
        double eta = offsets_f[j][oi];
        if (D) eta += to_double_nearest((*D)[j]);
        beff[j][oi] = one_minus_a * eta;
      }
    }
  }
  void end_step() {}
  // values closer than eps count as equal; counting those decisions flags the run
  int cmp(const V& x, const V& y) const {
    double diff = x - y;
    if (diff <= eps && diff >= -eps) {
      if (x != y) ++warned;
      return 0;
    }
    return diff < 0 ? -1 : 1;
  }
  const V& atom_lo(std::size_t i, std::size_t k) const { return alo[i][k]; }
  const V& atom_hi(std::size_t i, std::size_t k) const { return ahi[i][k]; }
  const V& thr(std::size_t i, std::size_t k) const { return thrv[i][k]; }
  void image(V& out, const V& x, std::size_t j, std::uint32_t oi) const {
    out = a * x + beff[j][oi];
  }
  bool a_is_zero() const { return zero_a; }
  Rational to_rational(const V& v) const {
    Rational r;
    mpq_set_d(r.get_mpq_t(), v);
    return r;
  }
  void initial_endpoints(V& lo, V& hi, std::size_t i, std::size_t k) const {
    lo = alo[i][k];
    hi = ahi[i][k];
  }
  unsigned long long warnings() const { return warned; }
};

// ---- generic run -------------------------------------------------------

template <class NS>
struct Run {
  using V = typename NS::V;

  const NetworkSpec& sp;
  const BasePartition& bp;
  const BranchSystems& bs;
  const TraceOptions& opt;
  const OffsetSequence* os;
  NS& ns;
  std::size_t d;

  // struct-of-arrays generation buffers; vectors only grow so scalar slots
  // keep their allocations across generations
  struct Gen {
    std::vector<V> lo, hi;
    std::vector<std::uint8_t> flags;  // bit0 lo_closed, bit1 hi_closed
    std::vector<std::uint32_t> bidx;
    std::size_t n = 0;
    void ensure(std::size_t atoms, std::size_t d) {
      std::size_t need = atoms * d;
      if (lo.size() < need) {
        lo.resize(need);
        hi.resize(need);
        flags.resize(need);
        bidx.resize(need);
      }
    }
  };
  Gen cur, nxt;

  struct Piece {
    std::vector<V> lo, hi;
    std::vector<std::uint8_t> flags;
    std::vector<std::uint32_t> atom;
    std::size_t n = 0;
    void ensure(std::size_t m) {
      if (lo.size() < m) {
        lo.resize(m);
        hi.resize(m);
        flags.resize(m);
        atom.resize(m);
      }
    }
  };
  std::vector<Piece> pieces;    // per coordinate, scratch
  std::vector<V> img_lo, img_hi;
  std::vector<std::uint8_t> img_flags;
  std::vector<std::vector<int>> out_pos;  // out_pos[i][j]: bit of arrow (i,j) in coord i signature
  std::vector<std::vector<std::uint32_t>> sig;  // sig[i][atom]

  // determine-assertion state, per (i, threshold k): first projection seen this step
  struct DetSlot {
    bool seen = false, flagged = false;
    V lo, hi;
    std::uint8_t flags = 0;
  };
  std::vector<std::vector<DetSlot>> det;
  std::vector<std::uint32_t> disj_refs;  // children indices, reused per coordinate

  ComplexityTrace out;

  Run(const NetworkSpec& s, const BasePartition& b, const BranchSystems& br,
      const TraceOptions& o, const OffsetSequence* seq, NS& n)
      : sp(s), bp(b), bs(br), opt(o), os(seq), ns(n), d(static_cast<std::size_t>(s.d)) {
    pieces.resize(d);
    img_lo.resize(d);
    img_hi.resize(d);
    img_flags.resize(d);
    out_pos.assign(d, std::vector<int>(d, -1));
    sig.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      const auto& cp = bp.coords[i];
      for (std::size_t k = 0; k < cp.out_js.size(); ++k)
        out_pos[i][static_cast<std::size_t>(cp.out_js[k])] = static_cast<int>(k);
      for (const auto& atom : cp.atoms) sig[i].push_back(atom.sig);
    }
    det.resize(d);
    for (std::size_t i = 0; i < d; ++i) det[i].resize(bp.coords[i].thresholds.size());
  }

  bool assertions_on() const { return opt.mode == TraceMode::injective_fast; }

  std::uint32_t offset_index(std::size_t parent, std::size_t j) const {
    const auto& col = bs.cols[j];
    std::uint32_t mask = 0;
    for (std::size_t b = 0; b < col.in_neighbors.size(); ++b) {
      std::size_t i = static_cast<std::size_t>(col.in_neighbors[b]);
      int pos = out_pos[i][j];
      std::uint32_t bit = (sig[i][cur.bidx[parent * d + i]] >> pos) & 1u;
      mask |= bit << b;
    }
    return col.mask_to_offset[mask];
  }

  // first atom of coordinate i whose interval contains the value x
  std::size_t locate(std::size_t i, const V& x) const {
    const auto& cp = bp.coords[i];
    std::size_t lo = 0, hi = cp.atoms.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      int c = ns.cmp(x, ns.atom_lo(i, mid));
      if (c > 0 || (c == 0 && cp.atoms[mid].iv.lo_closed))
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  // cut the image interval of coordinate i against the base atoms
  void collect_pieces(std::size_t i) {
    auto& pc = pieces[i];
    pc.n = 0;
    const auto& cp = bp.coords[i];
    bool ilc = img_flags[i] & 1, ihc = img_flags[i] & 2;
    std::size_t k = locate(i, img_lo[i]);
    for (; k < cp.atoms.size(); ++k) {
      int c = ns.cmp(ns.atom_lo(i, k), img_hi[i]);
      if (c > 0 || (c == 0 && !(cp.atoms[k].iv.lo_closed && ihc))) break;
      // intersect [img_lo,img_hi] with atom k
      const V* plo;
      bool plc;
      int cl = ns.cmp(img_lo[i], ns.atom_lo(i, k));
      if (cl > 0) {
        plo = &img_lo[i];
        plc = ilc;
      } else if (cl < 0) {
        plo = &ns.atom_lo(i, k);
        plc = cp.atoms[k].iv.lo_closed;
      } else {
        plo = &img_lo[i];
        plc = ilc && cp.atoms[k].iv.lo_closed;
      }
      const V* phi;
      bool phc;
      int ch = ns.cmp(img_hi[i], ns.atom_hi(i, k));
      if (ch < 0) {
        phi = &img_hi[i];
        phc = ihc;
      } else if (ch > 0) {
        phi = &ns.atom_hi(i, k);
        phc = cp.atoms[k].iv.hi_closed;
      } else {
        phi = &img_hi[i];
        phc = ihc && cp.atoms[k].iv.hi_closed;
      }
      int cc = ns.cmp(*plo, *phi);
      if (cc > 0 || (cc == 0 && !(plc && phc))) continue;  // empty (open-boundary edge)
      pc.ensure(pc.n + 1);
      pc.lo[pc.n] = *plo;
      pc.hi[pc.n] = *phi;
      pc.flags[pc.n] = static_cast<std::uint8_t>((plc ? 1 : 0) | (phc ? 2 : 0));
      pc.atom[pc.n] = static_cast<std::uint32_t>(k);
      ++pc.n;
    }
  }

  void determine_probe(std::size_t parent, std::size_t i) {
    bool ilc = img_flags[i] & 1, ihc = img_flags[i] & 2;
    for (std::size_t k = 0; k < bp.coords[i].thresholds.size(); ++k) {
      const V& t = ns.thr(i, k);
      int cl = ns.cmp(t, img_lo[i]);
      if (cl < 0 || (cl == 0 && !ilc)) continue;
      int ch = ns.cmp(t, img_hi[i]);
      if (ch > 0 || (ch == 0 && !ihc)) continue;
      auto& slot = det[i][k];
      const V& plo = cur.lo[parent * d + i];
      const V& phi = cur.hi[parent * d + i];
      std::uint8_t pf = cur.flags[parent * d + i];
      if (!slot.seen) {
        slot.seen = true;
        slot.lo = plo;
        slot.hi = phi;
        slot.flags = pf;
      } else if (!slot.flagged && (ns.cmp(slot.lo, plo) != 0 || ns.cmp(slot.hi, phi) != 0 ||
                                   slot.flags != pf)) {
        slot.flagged = true;
        ++out.violations.determine;
      }
    }
  }

  void disjointness_check(std::size_t i) {
    auto key_lo = [this, i](std::uint32_t c) -> const V& { return nxt.lo[c * d + i]; };
    auto key_hi = [this, i](std::uint32_t c) -> const V& { return nxt.hi[c * d + i]; };
    auto key_fl = [this, i](std::uint32_t c) { return nxt.flags[c * d + i]; };
    std::sort(disj_refs.begin(), disj_refs.end(), [&](std::uint32_t x, std::uint32_t y) {
      int c = ns.cmp(key_lo(x), key_lo(y));
      if (c) return c < 0;
      bool xc = key_fl(x) & 1, yc = key_fl(y) & 1;
      if (xc != yc) return xc;  // closed start sorts first
      c = ns.cmp(key_hi(x), key_hi(y));
      if (c) return c < 0;
      return (key_fl(x) & 2) < (key_fl(y) & 2);
    });
    bool have_prev = false;
    std::uint32_t prev = 0;
    for (std::uint32_t r : disj_refs) {
      if (have_prev) {
        if (ns.cmp(key_lo(r), key_lo(prev)) == 0 && ns.cmp(key_hi(r), key_hi(prev)) == 0 &&
            key_fl(r) == key_fl(prev))
          continue;  // identical projection interval, one set element
        int c = ns.cmp(key_lo(r), key_hi(prev));
        if (c < 0 || (c == 0 && (key_fl(r) & 1) && (key_fl(prev) & 2)))
          ++out.violations.disjointness;
        if (ns.cmp(key_hi(r), key_hi(prev)) > 0) prev = r;
      } else {
        prev = r;
        have_prev = true;
      }
    }
  }

  void materialize_initial() {
    unsigned long long total = bp.total_ull;
    cur.ensure(total, d);
    std::vector<std::uint32_t> odo(d, 0);
    for (unsigned long long f = 0; f < total; ++f) {
      for (std::size_t i = 0; i < d; ++i) {
        std::size_t slot = static_cast<std::size_t>(f) * d + i;
        ns.initial_endpoints(cur.lo[slot], cur.hi[slot], i, odo[i]);
        const auto& iv = bp.coords[i].atoms[odo[i]].iv;
        cur.flags[slot] = static_cast<std::uint8_t>((iv.lo_closed ? 1 : 0) | (iv.hi_closed ? 2 : 0));
        cur.bidx[slot] = odo[i];
      }
      for (std::size_t i = d; i-- > 0;) {
        if (++odo[i] < bp.coords[i].atoms.size()) break;
        odo[i] = 0;
      }
    }
    cur.n = static_cast<std::size_t>(total);
  }

  Generation snapshot(long t, const Gen& g) const {
    Generation gen;
    gen.t = t;
    gen.atoms.resize(g.n);
    for (std::size_t k = 0; k < g.n; ++k) {
      auto& atom = gen.atoms[k];
      atom.rect.sides.resize(d);
      atom.base_idx.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        std::size_t slot = k * d + i;
        atom.rect.sides[i] = FlaggedInterval{ns.to_rational(g.lo[slot]), ns.to_rational(g.hi[slot]),
                                             (g.flags[slot] & 1) != 0, (g.flags[slot] & 2) != 0};
        atom.base_idx[i] = g.bidx[slot];
      }
    }
    return gen;
  }

  void fill_itineraries(Generation& gen) const {
    if (out.links.empty()) return;
    for (std::size_t k = 0; k < gen.atoms.size(); ++k)
      gen.atoms[k].itinerary = out.itinerary_of(out.links.size(), k);
  }

  ComplexityTrace run() {
    auto t0 = std::chrono::steady_clock::now();
    out.mode = opt.mode;
    out.numeric = opt.numeric;
    // symbols and parent indices are stored as 32-bit
    if (!bp.total_fits || bp.total_ull > opt.max_atoms || bp.total_ull > 0xFFFFFFFFull ||
        opt.max_atoms > 0xFFFFFFFFull) {
      out.truncation = Truncation::atom_cap;
      return std::move(out);
    }
    materialize_initial();
    out.C.push_back(cur.n);
    out.reached_t = 1;
    if (opt.record_links) {
      out.links.emplace_back();
      auto& l0 = out.links.back();
      l0.resize(cur.n);
      for (std::size_t k = 0; k < cur.n; ++k)
        l0[k] = Link{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k)};
    }
    if (opt.keep_generations) {
      out.generations.push_back(snapshot(1, cur));
      fill_itineraries(out.generations.back());
    }
    long t = 1;
    while (t < opt.t_max) {
      if (os && t > os->steps_available()) {
        out.truncation = Truncation::offsets_exhausted;
        break;
      }
      auto step_start = std::chrono::steady_clock::now();
      const std::vector<Rational>* D = nullptr;
      if (os) D = &os->at(t);
      ns.begin_step(D);
      for (auto& col : det)
        for (auto& slot : col) slot = DetSlot{};
      StepStats st;
      nxt.n = 0;
      bool capped = false;
      std::vector<std::vector<std::uint32_t>> piece_first;  // per coord, first child per piece
      if (assertions_on()) piece_first.assign(d, {});
      std::vector<std::uint32_t> stride(d, 1);
      for (std::size_t parent = 0; parent < cur.n && !capped; ++parent) {
        unsigned long long count = 1;
        for (std::size_t i = 0; i < d; ++i) {
          std::uint32_t oi = offset_index(parent, i);
          std::size_t slot = parent * d + i;
          if (ns.a_is_zero()) {
            ns.image(img_lo[i], cur.lo[slot], i, oi);
            img_hi[i] = img_lo[i];
            img_flags[i] = 3;  // the image collapses to one closed point
          } else {
            ns.image(img_lo[i], cur.lo[slot], i, oi);
            ns.image(img_hi[i], cur.hi[slot], i, oi);
            img_flags[i] = cur.flags[slot];
          }
          collect_pieces(i);
          if (assertions_on()) determine_probe(parent, i);
          count *= pieces[i].n;
        }
        if (count == 0) {
          // image escaped every base atom; cannot happen for a valid spec
          ++out.violations.monotonic;
          continue;
        }
        if (nxt.n + count > opt.max_atoms) {
          capped = true;
          break;
        }
        if (count > bp.total_ull) ++out.violations.branching;
        st.branching_atoms += count > 1;
        if (count > st.max_branch) st.max_branch = static_cast<unsigned>(count);
        // product of per-coordinate pieces, last coordinate fastest
        for (std::size_t i = d; i-- > 0;) {
          stride[i] = i + 1 < d ? stride[i + 1] * static_cast<std::uint32_t>(pieces[i + 1].n) : 1;
        }
        nxt.ensure(nxt.n + count, d);
        std::vector<std::uint32_t> odo(d, 0);
        for (unsigned long long c = 0; c < count; ++c) {
          std::size_t child = nxt.n + static_cast<std::size_t>(c);
          unsigned long long symbol = 0;
          for (std::size_t i = 0; i < d; ++i) {
            const auto& pc = pieces[i];
            std::size_t slot = child * d + i;
            nxt.lo[slot] = pc.lo[odo[i]];
            nxt.hi[slot] = pc.hi[odo[i]];
            nxt.flags[slot] = pc.flags[odo[i]];
            nxt.bidx[slot] = pc.atom[odo[i]];
            symbol += pc.atom[odo[i]] * bp.strides[i];
          }
          if (opt.record_links) {
            if (out.links.size() < static_cast<std::size_t>(t) + 1) out.links.emplace_back();
          }
          if (opt.record_links)
            out.links.back().push_back(Link{static_cast<std::uint32_t>(parent),
                                            static_cast<std::uint32_t>(symbol)});
          for (std::size_t i = d; i-- > 0;) {
            if (++odo[i] < pieces[i].n) break;
            odo[i] = 0;
          }
        }
        if (assertions_on()) {
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t pk = 0; pk < pieces[i].n; ++pk)
              piece_first[i].push_back(static_cast<std::uint32_t>(nxt.n + pk * stride[i]));
        }
        nxt.n += static_cast<std::size_t>(count);
      }
      if (capped) {
        if (opt.record_links && out.links.size() == static_cast<std::size_t>(t) + 1)
          out.links.pop_back();
        out.truncation = Truncation::atom_cap;
        break;
      }
      if (assertions_on()) {
        for (std::size_t i = 0; i < d; ++i) {
          disj_refs = std::move(piece_first[i]);
          disjointness_check(i);
          piece_first[i] = std::move(disj_refs);
        }
      }
      if (nxt.n < cur.n) ++out.violations.monotonic;
      if (opt.record_links && out.links.size() < static_cast<std::size_t>(t) + 1)
        out.links.emplace_back();  // every parent vanished; keep indexing aligned
      std::swap(cur.lo, nxt.lo);
      std::swap(cur.hi, nxt.hi);
      std::swap(cur.flags, nxt.flags);
      std::swap(cur.bidx, nxt.bidx);
      cur.n = nxt.n;
      ns.end_step();
      ++t;
      out.C.push_back(cur.n);
      out.reached_t = t;
      st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - step_start).count();
      out.steps.push_back(st);
      if (opt.keep_generations) {
        out.generations.push_back(snapshot(t, cur));
        fill_itineraries(out.generations.back());
      }
      double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (elapsed > opt.max_seconds && t < opt.t_max) {
        out.truncation = Truncation::time_cap;
        break;
      }
    }
    out.final_gen = snapshot(out.reached_t, cur);
    fill_itineraries(out.final_gen);
    out.boundary_warnings = ns.warnings();
    out.certified = opt.numeric == NumericMode::exact ? true : out.boundary_warnings == 0;
    return std::move(out);
  }
};

}  // namespace engine_detail

inline ComplexityTrace complexity_trace_impl(const NetworkSpec& sp, const OffsetSequence* os,
                                             const TraceOptions& opt) {
  require_valid(sp);
  auto bp = base_partition(sp, opt.extra_cuts);
  auto bs = branch_systems(sp, opt.indeg_cap);
  if (opt.mode == TraceMode::injective_fast) {
    auto rep = injectivity_analysis(sp, bs);
    if (!rep.injective_at_a) {
      std::string msg = "injective-fast refused: branch images overlap";
      if (!rep.witnesses.empty()) {
        const auto& w = rep.witnesses.front();
        msg += " on coordinate " + std::to_string(w.j) + " (offsets " +
               format_rational(w.eta_low) + " and " + format_rational(w.eta_high) +
               "); a0 = " + format_rational(rep.a0) + ", use itinerary-exact mode";
      }
      throw EngineError(msg);
    }
  }
  if (opt.numeric == NumericMode::float64) {
    engine_detail::FloatNS ns;
    ns.init(sp, bp, bs, opt.eps);
    engine_detail::Run<engine_detail::FloatNS> run(sp, bp, bs, opt, os, ns);
    return run.run();
  }
  engine_detail::ScaledNS ns;
  ns.init(sp, bp, bs, opt.extra_cuts, os);
  engine_detail::Run<engine_detail::ScaledNS> run(sp, bp, bs, opt, os, ns);
  return run.run();
}

inline ComplexityTrace complexity_trace(const NetworkSpec& sp, const TraceOptions& opt = {}) {
  if (sp.mode == Mode::sequence)
    return complexity_trace_impl(sp, sp.offsets ? &*sp.offsets : nullptr, opt);
  return complexity_trace_impl(sp, nullptr, opt);
}

inline ComplexityTrace sequence_trace(const NetworkSpec& sp, const OffsetSequence& os,
                                      const TraceOptions& opt = {}) {
  NetworkSpec copy = sp;
  copy.mode = Mode::sequence;
  copy.offsets = os;
  return complexity_trace_impl(copy, &os, opt);
}

// One refinement step on explicit atoms through the exact rational path; the
// reference implementation the scaled trace is tested against.
inline std::vector<TraceAtom> step(const NetworkSpec& sp, const std::vector<TraceAtom>& atoms,
                                   const std::vector<Rational>* offset = nullptr) {
  require_valid(sp);
  auto bp = base_partition(sp);
  auto bs = branch_systems(sp);
  engine_detail::RationalNS ns;
  ns.init(sp, bp, bs);
  TraceOptions opt;
  opt.t_max = 2;
  opt.mode = TraceMode::itinerary_exact;
  engine_detail::Run<engine_detail::RationalNS> run(sp, bp, bs, opt, nullptr, ns);
  // seed the current generation from the given atoms
  run.cur.ensure(atoms.size(), static_cast<std::size_t>(sp.d));
  std::size_t d = static_cast<std::size_t>(sp.d);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto& atom = atoms[k];
    if (atom.rect.dim() != d) throw std::invalid_argument("step: atom dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) {
      const auto& side = atom.rect.sides[i];
      std::uint32_t ai = classify_coord(bp.coords[i], interval_representative(side));
      const auto& host = bp.coords[i].atoms[ai].iv;
      auto inter = interval_intersect(side, host);
      if (!inter || !interval_equal(*inter, side))
        throw std::invalid_argument("step: atom straddles a base partition cut on coordinate " +
                                    std::to_string(i));
      std::size_t slot = k * d + i;
      run.cur.lo[slot] = side.lo;
      run.cur.hi[slot] = side.hi;
      run.cur.flags[slot] =
          static_cast<std::uint8_t>((side.lo_closed ? 1 : 0) | (side.hi_closed ? 2 : 0));
      run.cur.bidx[slot] = ai;
    }
  }
  run.cur.n = atoms.size();
  ns.begin_step(offset);
  std::vector<TraceAtom> children;
  for (std::size_t parent = 0; parent < run.cur.n; ++parent) {
    unsigned long long count = 1;
    for (std::size_t i = 0; i < d; ++i) {
      std::uint32_t oi = run.offset_index(parent, i);
      std::size_t slot = parent * d + i;
      if (ns.a_is_zero()) {
        ns.image(run.img_lo[i], run.cur.lo[slot], i, oi);
        run.img_hi[i] = run.img_lo[i];
        run.img_flags[i] = 3;
      } else {
        ns.image(run.img_lo[i], run.cur.lo[slot], i, oi);
        ns.image(run.img_hi[i], run.cur.hi[slot], i, oi);
        run.img_flags[i] = run.cur.flags[slot];
      }
      run.collect_pieces(i);
      count *= run.pieces[i].n;
    }
    std::vector<std::uint32_t> odo(d, 0);
    for (unsigned long long c = 0; c < count; ++c) {
      TraceAtom child;
      child.rect.sides.resize(d);
      child.base_idx.resize(d);
      child.itinerary = atoms[parent].itinerary;
      unsigned long long symbol = 0;
      for (std::size_t i = 0; i < d; ++i) {
        const auto& pc = run.pieces[i];
        child.rect.sides[i] = FlaggedInterval{pc.lo[odo[i]], pc.hi[odo[i]],
                                              (pc.flags[odo[i]] & 1) != 0, (pc.flags[odo[i]] & 2) != 0};
        child.base_idx[i] = pc.atom[odo[i]];
        symbol += pc.atom[odo[i]] * bp.strides[i];
      }
      child.itinerary.push_back(static_cast<std::uint32_t>(symbol));
      children.push_back(std::move(child));
      for (std::size_t i = d; i-- > 0;) {
        if (++odo[i] < run.pieces[i].n) break;
        odo[i] = 0;
      }
    }
  }
  return children;
}

// ---- degeneracy measurements on a generation ---------------------------

namespace engine_detail {
inline std::uint64_t mix64(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}
inline std::uint64_t interval_key(const FlaggedInterval& iv) {
  std::uint64_t h = hash_value(iv.lo);
  h = mix64(h, hash_value(iv.hi));
  h = mix64(h, (iv.lo_closed ? 1u : 0u) | (iv.hi_closed ? 2u : 0u));
  return h;
}
}  // namespace engine_detail

// N(S): atoms whose projections to the coordinates in U equal the given intervals
inline unsigned long long degeneracy(const Generation& gen, const std::vector<int>& U,
                                     const std::vector<FlaggedInterval>& values) {
  if (U.size() != values.size()) throw std::invalid_argument("degeneracy: |U| != |values|");
  unsigned long long n = 0;
  for (const auto& atom : gen.atoms) {
    bool match = true;
    for (std::size_t u = 0; u < U.size() && match; ++u)
      match = interval_equal(atom.rect.sides[static_cast<std::size_t>(U[u])], values[u]);
    n += match;
  }
  return n;
}

// n(U,t): the largest fiber of the projection to U
inline unsigned long long max_degeneracy(const Generation& gen, const std::vector<int>& U) {
  if (U.empty()) return gen.atoms.size();
  std::unordered_map<std::uint64_t, unsigned long long> groups;
  unsigned long long best = 0;
  for (const auto& atom : gen.atoms) {
    std::uint64_t h = 0x243f6a8885a308d3ull;
    for (int u : U)
      h = engine_detail::mix64(h, engine_detail::interval_key(atom.rect.sides[static_cast<std::size_t>(u)]));
    auto& g = ++groups[h];
    if (g > best) best = g;
  }
  return best;
}

// the unique projection interval whose image covers each threshold, if any
struct DetermineInterval {
  bool present = false;
  FlaggedInterval interval;
  unsigned long long distinct = 0;  // distinct projection intervals found (1 expected)
};

inline std::vector<std::vector<DetermineInterval>> determine_intervals(const NetworkSpec& sp,
                                                                       const Generation& gen) {
  auto bp = base_partition(sp);
  auto bs = branch_systems(sp);
  Rational one_minus_a = 1 - sp.a;
  std::vector<std::vector<DetermineInterval>> out(static_cast<std::size_t>(sp.d));
  for (int i = 0; i < sp.d; ++i)
    out[static_cast<std::size_t>(i)].resize(bp.coords[static_cast<std::size_t>(i)].thresholds.size());
  for (const auto& atom : gen.atoms) {
    for (int i = 0; i < sp.d; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      const auto& col = bs.cols[ii];
      std::uint32_t mask = 0;
      for (std::size_t b = 0; b < col.in_neighbors.size(); ++b) {
        std::size_t src = static_cast<std::size_t>(col.in_neighbors[b]);
        const auto& cp = bp.coords[src];
        int pos = -1;
        for (std::size_t k = 0; k < cp.out_js.size(); ++k)
          if (cp.out_js[k] == i) pos = static_cast<int>(k);
        std::uint32_t bit = (cp.atoms[atom.base_idx[src]].sig >> pos) & 1u;
        mask |= bit << b;
      }
      Rational b = one_minus_a * col.offsets[col.mask_to_offset[mask]];
      const auto& side = atom.rect.sides[ii];
      FlaggedInterval image = sp.a == 0
                                  ? FlaggedInterval{b, b, true, true}
                                  : FlaggedInterval{sp.a * side.lo + b, sp.a * side.hi + b,
                                                    side.lo_closed, side.hi_closed};
      const auto& cp = bp.coords[ii];
      for (std::size_t k = 0; k < cp.thresholds.size(); ++k) {
        if (!interval_contains(image, cp.thresholds[k])) continue;
        auto& slot = out[ii][k];
        if (!slot.present) {
          slot.present = true;
          slot.interval = side;
          slot.distinct = 1;
        } else if (!interval_equal(slot.interval, side)) {
          ++slot.distinct;
        }
      }
    }
  }
  return out;
}

}  // namespace dtrn
