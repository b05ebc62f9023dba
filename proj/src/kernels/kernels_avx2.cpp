// AVX2 variants. Each 8-element block is reduced with the same tree as the
// scalar backend: hadd_pd of the two 4-lane vectors yields the level-1 pair
// sums, the 128-bit halves add to the level-2 sums, and the final scalar add
// completes ((x0+x1)+(x2+x3)) + ((x4+x5)+(x6+x7)). Bit-identical to scalar.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pse::kernels::detail {

double pairwise_combine(const double* s, std::size_t m) noexcept;
double tail_sum(const double* x, std::size_t t) noexcept;
double tail_centered_dot(const double* a, const double* b, double ca, double cb,
                         std::size_t t) noexcept;
double tail_gather_sum(const double* v, const std::uint32_t* idx, std::size_t t) noexcept;

namespace {

inline std::vector<double>& scratch(std::size_t n) {
  static thread_local std::vector<double> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

// ((x0+x1)+(x2+x3)) + ((x4+x5)+(x6+x7)) for lanes lo=[x0..x3], hi=[x4..x7]
inline double block8_tree(__m256d lo, __m256d hi) noexcept {
  const __m256d h = _mm256_hadd_pd(lo, hi);  // [x0+x1, x4+x5, x2+x3, x6+x7]
  const __m128d l2 = _mm_add_pd(_mm256_castpd256_pd128(h), _mm256_extractf128_pd(h, 1));
  return _mm_cvtsd_f64(l2) + _mm_cvtsd_f64(_mm_unpackhi_pd(l2, l2));
}

inline __m128i load_idx4(const std::uint32_t* p) noexcept {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
}

}  // namespace

double sum_avx2(const double* x, std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  if (nblocks == 0) return t ? tail_sum(x, t) : 0.0;
  auto& s = scratch(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const double* p = x + 8 * b;
    s[b] = block8_tree(_mm256_loadu_pd(p), _mm256_loadu_pd(p + 4));
  }
  double total = pairwise_combine(s.data(), nblocks);
  if (t) total += tail_sum(x + 8 * nblocks, t);
  return total;
}

double centered_dot_avx2(const double* a, const double* b, double ca, double cb,
                         std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  if (nblocks == 0) return t ? tail_centered_dot(a, b, ca, cb, t) : 0.0;
  const __m256d vca = _mm256_set1_pd(ca);
  const __m256d vcb = _mm256_set1_pd(cb);
  auto& s = scratch(nblocks);
  for (std::size_t blk = 0; blk < nblocks; ++blk) {
    const double* pa = a + 8 * blk;
    const double* pb = b + 8 * blk;
    const __m256d lo = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(pa), vca),
                                     _mm256_sub_pd(_mm256_loadu_pd(pb), vcb));
    const __m256d hi = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(pa + 4), vca),
                                     _mm256_sub_pd(_mm256_loadu_pd(pb + 4), vcb));
    s[blk] = block8_tree(lo, hi);
  }
  double total = pairwise_combine(s.data(), nblocks);
  if (t) total += tail_centered_dot(a + 8 * nblocks, b + 8 * nblocks, ca, cb, t);
  return total;
}

double gather_sum_avx2(const double* v, const std::uint32_t* idx, std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  if (nblocks == 0) return t ? tail_gather_sum(v, idx, t) : 0.0;
  auto& s = scratch(nblocks);
  for (std::size_t blk = 0; blk < nblocks; ++blk) {
    const std::uint32_t* pi = idx + 8 * blk;
    const __m256d lo = _mm256_i32gather_pd(v, load_idx4(pi), 8);
    const __m256d hi = _mm256_i32gather_pd(v, load_idx4(pi + 4), 8);
    s[blk] = block8_tree(lo, hi);
  }
  double total = pairwise_combine(s.data(), nblocks);
  if (t) total += tail_gather_sum(v, idx + 8 * nblocks, t);
  return total;
}

}  // namespace pse::kernels::detail

#endif  // x86_64
