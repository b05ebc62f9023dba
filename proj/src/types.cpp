#include "pse/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "pse/errors.hpp"

namespace pse {

const char* design_name(Design d) noexcept {
  return d == Design::paired ? "paired" : "independent";
}

PairedDataset PairedDataset::create(std::string metric, std::vector<std::string> seeds,
                                    std::vector<double> y1, std::vector<double> y0) {
  if (seeds.empty()) fail(ErrorCode::empty_dataset, "dataset for metric '" + metric + "' is empty");
  if (seeds.size() != y1.size() || seeds.size() != y0.size())
    fail(ErrorCode::invalid_config,
         "misaligned dataset columns: " + std::to_string(seeds.size()) + " seeds, " +
             std::to_string(y1.size()) + " y1, " + std::to_string(y0.size()) + " y0");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!std::isfinite(y1[i]) || !std::isfinite(y0[i]))
      fail(ErrorCode::non_finite_value, "non-finite outcome for seed '" + seeds[i] + "'");
  }
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& s : seeds) {
      if (!seen.insert(s).second)
        fail(ErrorCode::duplicate_record, "duplicate seed '" + s + "' in dataset");
    }
  }

  // Canonical order: joint sort by seed id.
  std::vector<std::size_t> order(seeds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return seeds[a] < seeds[b]; });

  PairedDataset d;
  d.metric_ = std::move(metric);
  d.seeds_.reserve(seeds.size());
  d.y1_.reserve(seeds.size());
  d.y0_.reserve(seeds.size());
  for (std::size_t i : order) {
    d.seeds_.push_back(std::move(seeds[i]));
    d.y1_.push_back(y1[i]);
    d.y0_.push_back(y0[i]);
  }
  return d;
}

std::vector<double> PairedDataset::differences() const {
  std::vector<double> d(y1_.size());
  for (std::size_t i = 0; i < y1_.size(); ++i) d[i] = y1_[i] - y0_[i];
  return d;
}

double DesignStats::correlation() const {
  if (!rho)
    fail(ErrorCode::degenerate_variance,
         "correlation undefined: a regime column has zero variance");
  return *rho;
}

}  // namespace pse
