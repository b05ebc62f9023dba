#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Reduction kernels behind every statistic in the library.
//
// All backends evaluate one fixed summation tree: 8-element blocks reduced as
// ((x0+x1)+(x2+x3)) + ((x4+x5)+(x6+x7)), block sums combined by a shared
// pairwise scheme, sequential tail. The tree is chosen so the AVX2/NEON
// variants reproduce the scalar results bit-for-bit (equivalence-tested), so
// backend selection can never change a published number. Requires
// -ffp-contract=off (set project-wide) so the scalar path does not fuse
// multiply-adds.

namespace pse::kernels {

enum class Backend { scalar, avx2, neon };

bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
void set_backend(Backend b);  // throws Error(invalid_config) if unsupported
std::string_view backend_name(Backend b) noexcept;

// sum_i x[i]
double sum(std::span<const double> x) noexcept;

// sum_i (a[i] - ca) * (b[i] - cb); covariance/variance workhorse
double centered_dot(std::span<const double> a, double ca,
                    std::span<const double> b, double cb) noexcept;

// sum_k values[idx[k]]; subsample-mean workhorse. Indices must be in range.
double gather_sum(std::span<const double> values,
                  std::span<const std::uint32_t> idx) noexcept;

namespace detail {

// Shared by every backend so cross-block combination is identical.
double pairwise_combine(const double* s, std::size_t m) noexcept;
double tail_sum(const double* x, std::size_t t) noexcept;
double tail_centered_dot(const double* a, const double* b, double ca, double cb,
                         std::size_t t) noexcept;
double tail_gather_sum(const double* v, const std::uint32_t* idx, std::size_t t) noexcept;

double sum_scalar(const double* x, std::size_t n) noexcept;
double centered_dot_scalar(const double* a, const double* b, double ca, double cb,
                           std::size_t n) noexcept;
double gather_sum_scalar(const double* v, const std::uint32_t* idx, std::size_t n) noexcept;

#if defined(__x86_64__) || defined(_M_X64)
double sum_avx2(const double* x, std::size_t n) noexcept;
double centered_dot_avx2(const double* a, const double* b, double ca, double cb,
                         std::size_t n) noexcept;
double gather_sum_avx2(const double* v, const std::uint32_t* idx, std::size_t n) noexcept;
#endif

#if defined(__aarch64__)
double sum_neon(const double* x, std::size_t n) noexcept;
double centered_dot_neon(const double* a, const double* b, double ca, double cb,
                         std::size_t n) noexcept;
double gather_sum_neon(const double* v, const std::uint32_t* idx, std::size_t n) noexcept;
#endif

}  // namespace detail

}  // namespace pse::kernels
