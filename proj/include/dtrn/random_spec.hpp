#pragma once

// Seeded random instances with a guaranteed injectivity margin: the update
// weight is drawn strictly below the column-gap bound a0, so every draw is a
// legal input for the fast counting mode.

#include <random>
#include <vector>

#include "branches.hpp"
#include "network.hpp"

namespace dtrn {

struct RandomSpecOptions {
  int d_min = 1, d_max = 4;
  double arrow_density = 0.5;
  int weight_scale = 4;     // raw weights drawn from 1..weight_scale
  int threshold_den = 8;    // thresholds k/threshold_den, 0 < k < den
};

inline NetworkSpec random_spec(std::uint64_t seed, const RandomSpecOptions& o = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(o.d_min, o.d_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int d = dim(rng);
  auto sp = make_spec(d);
  std::uniform_int_distribution<int> rawW(1, o.weight_scale);
  std::uniform_int_distribution<int> rawT(1, o.threshold_den - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> vertex(0, d - 1);
  std::vector<std::vector<long>> raw(static_cast<std::size_t>(d),
                                     std::vector<long>(static_cast<std::size_t>(d), 0));
  for (int j = 0; j < d; ++j) {
    std::size_t jj = static_cast<std::size_t>(j);
    for (int i = 0; i < d; ++i)
      if (unit(rng) < o.arrow_density) raw[static_cast<std::size_t>(i)][jj] = rawW(rng);
    bool empty = true;
    for (int i = 0; i < d; ++i) empty = empty && raw[static_cast<std::size_t>(i)][jj] == 0;
    if (empty) raw[static_cast<std::size_t>(vertex(rng))][jj] = rawW(rng);
    long sum = 0;
    for (int i = 0; i < d; ++i) sum += raw[static_cast<std::size_t>(i)][jj];
    for (int i = 0; i < d; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      if (raw[ii][jj] == 0) continue;
      sp.K[ii][jj] = make_rational(raw[ii][jj], sum);
      sp.T[ii][jj] = make_rational(rawT(rng), o.threshold_den);
      sp.s[ii][jj] = coin(rng) ? 1 : -1;
    }
  }
  // a < a0 by construction, with margin
  auto rep = injectivity_analysis(sp);
  std::uniform_int_distribution<int> num(1, 15);
  sp.a = rep.a0 * make_rational(num(rng), 16);
  return canonicalize_spec(sp);
}

}  // namespace dtrn
