#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "pse/counter_rng.hpp"
#include "pse/types.hpp"

namespace pse::test {

// Deterministic generator for property-test inputs.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : stream_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * stream_.next_unit(); }
  std::int64_t below(std::int64_t n) {
    return static_cast<std::int64_t>(stream_.next_below(static_cast<std::uint64_t>(n)));
  }
  std::uint64_t bits() { return stream_.next(); }

 private:
  rng::Stream stream_;
};

inline std::vector<double> random_vector(TestRng& rng, std::int64_t n, double lo, double hi) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline PairedDataset make_dataset(std::vector<double> y1, std::vector<double> y0,
                                  const std::string& metric = "m") {
  std::vector<std::string> seeds;
  seeds.reserve(y1.size());
  for (std::size_t i = 0; i < y1.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%06zu", i);
    seeds.emplace_back(buf);
  }
  return PairedDataset::create(metric, std::move(seeds), std::move(y1), std::move(y0));
}

inline PairedDataset random_dataset(TestRng& rng, std::int64_t n, double lo = -1e3,
                                    double hi = 1e3) {
  return make_dataset(random_vector(rng, n, lo, hi), random_vector(rng, n, lo, hi));
}

inline bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace pse::test
