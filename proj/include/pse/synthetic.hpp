#pragma once

#include <cstdint>
#include <string>

#include "pse/types.hpp"

// Seeded two-regime simulator with common random numbers and exactly known
// moments; the analytic oracle behind the test suite and the `simulate`
// subcommand.
//
// Generative model, per seed index i with independent standard normals
// C_i, e1_i, e0_i drawn from counter-derived streams:
//
//   Y(d, s_i) = mu_d + sigma_d * (sqrt(rho) * C_i + sqrt(1 - rho) * e_d_i)
//
// with mu_1 = mu_0 + delta. Then Var(Y(d,s)) = sigma_d^2 and
// Corr(Y(1,s), Y(0,s)) = rho exactly.

namespace pse::synthetic {

struct SyntheticSpec {
  double delta = 0.0;
  double mu0 = 0.0;
  double sigma1 = 1.0;
  double sigma0 = 1.0;
  double rho = 0.0;  // [0, 1) for generate(); see generate_extended_rho
  std::int64_t n_seeds = 0;
  std::uint64_t master_seed = 0;
  std::string metric_name = "metric";
};

// "s" + zero-padded index; fixed width keeps lexicographic order == index order.
std::string seed_id(std::int64_t index);

// Throws Error(invalid_spec) on invalid fields (rho outside [0,1), sigma <= 0,
// n_seeds < 1, ...). Deterministic: bit-identical across runs and schedules;
// extending n_seeds preserves earlier pairs.
PairedDataset generate(const SyntheticSpec& spec);

// Same generator with rho allowed in [-1, 1]: rho = 1 exercises the pure
// common-random-numbers limit, negative rho the "pairing harmful" branch.
// Negative rho flips the sign of the shared component in regime 0.
PairedDataset generate_extended_rho(const SyntheticSpec& spec);

struct AnalyticMoments {
  double delta = 0.0;
  DesignStats stats;  // population sigma1, sigma0, cov, rho implied by the spec
};

AnalyticMoments analytic_moments(const SyntheticSpec& spec);

}  // namespace pse::synthetic
