#include <catch2/catch_amalgamated.hpp>

#include <dtrn/base_partition.hpp>
#include <dtrn/presets.hpp>

using namespace dtrn;

TEST_CASE("inhibiting cut splits left closed at zero, threshold goes right") {
  // s = -1 on threshold T: branches [0,T) and [T,1]
  auto bp = base_partition(self_inhibitor());
  REQUIRE(bp.coords.size() == 1);
  const auto& atoms = bp.coords[0].atoms;
  REQUIRE(atoms.size() == 2);
  CHECK(format_interval(atoms[0].iv) == "[0,1/2)");
  CHECK(format_interval(atoms[1].iv) == "[1/2,1]");
  CHECK(atoms[0].sig == 1);  // x < T keeps production on
  CHECK(atoms[1].sig == 0);
}

TEST_CASE("activating cut keeps the threshold on the left") {
  // s = +1 on threshold T: branches [0,T] and (T,1]
  auto sp = circuit(2, {+1, -1});
  auto bp = base_partition(sp);
  const auto& a0 = bp.coords[0].atoms;  // coordinate 0 activates coordinate 1
  REQUIRE(a0.size() == 2);
  CHECK(format_interval(a0[0].iv) == "[0,1/2]");
  CHECK(format_interval(a0[1].iv) == "(1/2,1]");
  CHECK(a0[0].sig == 0);
  CHECK(a0[1].sig == 1);
}

TEST_CASE("opposite signs at one threshold isolate the threshold point") {
  auto bp = base_partition(p53_core());
  std::vector<std::size_t> counts;
  for (const auto& cp : bp.coords) counts.push_back(cp.atoms.size());
  CHECK(counts == std::vector<std::size_t>{3, 2, 2, 2});
  CHECK(bp.total == 24);
  // coordinate 0 drives with both signs at 1/2, so {1/2} is its own atom
  const auto& mid = bp.coords[0].atoms[1];
  CHECK(is_singleton(mid.iv));
  CHECK(mid.iv.lo == make_rational(1, 2));
  CHECK(mid.sig == 0);  // both heaviside branches off exactly at the threshold
}

TEST_CASE("atoms tile the unit interval in order") {
  for (const char* name : {"self-inhibitor", "toggle-switch", "p53-core"}) {
    auto bp = base_partition(build_preset(name));
    for (const auto& cp : bp.coords) {
      REQUIRE_FALSE(cp.atoms.empty());
      CHECK(cp.atoms.front().iv.lo == Rational(0));
      CHECK(cp.atoms.front().iv.lo_closed);
      CHECK(cp.atoms.back().iv.hi == Rational(1));
      CHECK(cp.atoms.back().iv.hi_closed);
      for (std::size_t k = 1; k < cp.atoms.size(); ++k) {
        const auto& prev = cp.atoms[k - 1].iv;
        const auto& next = cp.atoms[k].iv;
        CHECK(prev.hi == next.lo);
        CHECK(prev.hi_closed != next.lo_closed);
        CHECK_FALSE(interval_overlaps(prev, next));
      }
    }
  }
}

TEST_CASE("strides run last coordinate fastest") {
  auto bp = base_partition(p53_core());
  REQUIRE(bp.strides.size() == 4);
  CHECK(bp.strides[3] == 1);
  CHECK(bp.strides[2] == 2);
  CHECK(bp.strides[1] == 4);
  CHECK(bp.strides[0] == 8);
  CHECK(bp.total_fits);
  CHECK(bp.total_ull == 24);
  for (unsigned long long f = 0; f < bp.total_ull; ++f)
    CHECK(bp.flat_index(bp.unflatten(f)) == f);
}

TEST_CASE("classify_point lands in the atom containing the point") {
  auto sp = p53_core();
  auto bp = base_partition(sp);
  std::vector<Rational> probes = {Rational(0),          make_rational(1, 4), make_rational(1, 2),
                                  make_rational(51, 64), Rational(1)};
  for (const auto& v : probes) {
    std::vector<Rational> x(4, v);
    auto idx = classify_point(bp, x);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(interval_contains(bp.coords[i].atoms[idx[i]].iv, v));
  }
}

TEST_CASE("extra cuts refine a coordinate") {
  auto sp = self_inhibitor();
  auto bp = base_partition(sp, {{0, make_rational(1, 4), +1}});
  REQUIRE(bp.coords[0].atoms.size() == 3);
  CHECK(format_interval(bp.coords[0].atoms[0].iv) == "[0,1/4]");
  CHECK(format_interval(bp.coords[0].atoms[1].iv) == "(1/4,1/2)");
  CHECK(format_interval(bp.coords[0].atoms[2].iv) == "[1/2,1]");
  // the refinement must not change branch signatures
  CHECK(bp.coords[0].atoms[0].sig == bp.coords[0].atoms[1].sig);
}

TEST_CASE("classify_coord respects open ends at cut points") {
  auto sp = circuit(2, {+1, -1});
  auto bp = base_partition(sp);
  CHECK(classify_coord(bp.coords[0], make_rational(1, 2)) == 0);  // [0,1/2] holds T
  CHECK(classify_coord(bp.coords[1], make_rational(1, 2)) == 1);  // [1/2,1] holds T
}
