// NEON (aarch64) variants. vpaddq_f64 produces the level-1 pair sums of the
// canonical tree directly; the remaining levels match the scalar association,
// so results are bit-identical to the scalar backend.

#if defined(__aarch64__)

#include <arm_neon.h>

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

// ((x0+x1)+(x2+x3)) + ((x4+x5)+(x6+x7)) from four 2-lane vectors
inline double block8_tree(float64x2_t v0, float64x2_t v1, float64x2_t v2,
                          float64x2_t v3) noexcept {
  const float64x2_t p01 = vpaddq_f64(v0, v1);  // [x0+x1, x2+x3]
  const float64x2_t p23 = vpaddq_f64(v2, v3);  // [x4+x5, x6+x7]
  const float64x2_t q = vpaddq_f64(p01, p23);  // [(x0+x1)+(x2+x3), (x4+x5)+(x6+x7)]
  return vgetq_lane_f64(q, 0) + vgetq_lane_f64(q, 1);
}

}  // namespace

double sum_neon(const double* x, std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  if (nblocks == 0) return t ? tail_sum(x, t) : 0.0;
  auto& s = scratch(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const double* p = x + 8 * b;
    s[b] = block8_tree(vld1q_f64(p), vld1q_f64(p + 2), vld1q_f64(p + 4), vld1q_f64(p + 6));
  }
  double total = pairwise_combine(s.data(), nblocks);
  if (t) total += tail_sum(x + 8 * nblocks, t);
  return total;
}

double centered_dot_neon(const double* a, const double* b, double ca, double cb,
                         std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  if (nblocks == 0) return t ? tail_centered_dot(a, b, ca, cb, t) : 0.0;
  const float64x2_t vca = vdupq_n_f64(ca);
  const float64x2_t vcb = vdupq_n_f64(cb);
  auto& s = scratch(nblocks);
  for (std::size_t blk = 0; blk < nblocks; ++blk) {
    const double* pa = a + 8 * blk;
    const double* pb = b + 8 * blk;
    float64x2_t v[4];
    for (int i = 0; i < 4; ++i) {
      v[i] = vmulq_f64(vsubq_f64(vld1q_f64(pa + 2 * i), vca),
                       vsubq_f64(vld1q_f64(pb + 2 * i), vcb));
    }
    s[blk] = block8_tree(v[0], v[1], v[2], v[3]);
  }
  double total = pairwise_combine(s.data(), nblocks);
  if (t) total += tail_centered_dot(a + 8 * nblocks, b + 8 * nblocks, ca, cb, t);
  return total;
}

double gather_sum_neon(const double* v, const std::uint32_t* idx, std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  if (nblocks == 0) return t ? tail_gather_sum(v, idx, t) : 0.0;
  auto& s = scratch(nblocks);
  for (std::size_t blk = 0; blk < nblocks; ++blk) {
    const std::uint32_t* pi = idx + 8 * blk;
    double g[8];
    for (int i = 0; i < 8; ++i) g[i] = v[pi[i]];  // no f64 gather on NEON
    s[blk] = block8_tree(vld1q_f64(g), vld1q_f64(g + 2), vld1q_f64(g + 4), vld1q_f64(g + 6));
  }
  double total = pairwise_combine(s.data(), nblocks);
  if (t) total += tail_gather_sum(v, idx + 8 * nblocks, t);
  return total;
}

}  // namespace pse::kernels::detail

#endif  // aarch64
