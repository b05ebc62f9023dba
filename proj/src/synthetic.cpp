#include "pse/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pse/counter_rng.hpp"
#include "pse/dist.hpp"
#include "pse/errors.hpp"

namespace pse::synthetic {

namespace {

constexpr std::int64_t kMaxSeeds = 99'999'999;  // 8-digit ids

void validate_common(const SyntheticSpec& spec) {
  if (!(spec.sigma1 > 0.0) || !(spec.sigma0 > 0.0))
    fail(ErrorCode::invalid_spec, "sigma1 and sigma0 must be positive");
  if (!std::isfinite(spec.delta) || !std::isfinite(spec.mu0))
    fail(ErrorCode::invalid_spec, "delta and mu0 must be finite");
  if (spec.n_seeds < 1 || spec.n_seeds > kMaxSeeds)
    fail(ErrorCode::invalid_spec, "n_seeds must be in [1, " + std::to_string(kMaxSeeds) + "]");
  if (spec.metric_name.empty()) fail(ErrorCode::invalid_spec, "metric_name must be nonempty");
}

// Independent N(0,1) draw for (seed index, component), component in {0,1,2}.
double standard_normal(std::uint64_t master, std::int64_t index, int component) {
  const auto counter = static_cast<std::uint64_t>(index) * 4 + static_cast<std::uint64_t>(component);
  return normal_quantile(rng::to_unit(rng::at(master, counter)));
}

PairedDataset generate_impl(const SyntheticSpec& spec) {
  const double shared1 = std::sqrt(std::fabs(spec.rho)) * spec.sigma1;
  const double shared0 =
      (spec.rho < 0.0 ? -1.0 : 1.0) * std::sqrt(std::fabs(spec.rho)) * spec.sigma0;
  const double idio1 = std::sqrt(1.0 - std::fabs(spec.rho)) * spec.sigma1;
  const double idio0 = std::sqrt(1.0 - std::fabs(spec.rho)) * spec.sigma0;
  const double mu1 = spec.mu0 + spec.delta;

  std::vector<std::string> seeds;
  std::vector<double> y1, y0;
  seeds.reserve(spec.n_seeds);
  y1.reserve(spec.n_seeds);
  y0.reserve(spec.n_seeds);
  for (std::int64_t i = 0; i < spec.n_seeds; ++i) {
    const double c = standard_normal(spec.master_seed, i, 0);
    const double e1 = standard_normal(spec.master_seed, i, 1);
    const double e0 = standard_normal(spec.master_seed, i, 2);
    seeds.push_back(seed_id(i));
    y1.push_back(mu1 + shared1 * c + idio1 * e1);
    y0.push_back(spec.mu0 + shared0 * c + idio0 * e0);
  }
  return PairedDataset::create(spec.metric_name, std::move(seeds), std::move(y1), std::move(y0));
}

}  // namespace

std::string seed_id(std::int64_t index) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%08lld", static_cast<long long>(index));
  return buf;
}

PairedDataset generate(const SyntheticSpec& spec) {
  validate_common(spec);
  if (!(spec.rho >= 0.0) || !(spec.rho < 1.0))
    fail(ErrorCode::invalid_spec, "rho must lie in [0, 1); use generate_extended_rho for the "
                                  "rho = 1 and negative-rho branches");
  return generate_impl(spec);
}

PairedDataset generate_extended_rho(const SyntheticSpec& spec) {
  validate_common(spec);
  if (!(spec.rho >= -1.0) || !(spec.rho <= 1.0))
    fail(ErrorCode::invalid_spec, "rho out of [-1, 1]");
  return generate_impl(spec);
}

AnalyticMoments analytic_moments(const SyntheticSpec& spec) {
  AnalyticMoments m;
  m.delta = spec.delta;
  m.stats.n = spec.n_seeds;
  m.stats.sigma1 = spec.sigma1;
  m.stats.sigma0 = spec.sigma0;
  m.stats.cov = spec.rho * spec.sigma1 * spec.sigma0;
  m.stats.rho = spec.rho;
  return m;
}

}  // namespace pse::synthetic
