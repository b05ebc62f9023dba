#include "pse/kernels.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include "pse/errors.hpp"

namespace pse::kernels {

namespace detail {

double pairwise_combine(const double* s, std::size_t m) noexcept {
  if (m <= 8) {
    double acc = s[0];
    for (std::size_t i = 1; i < m; ++i) acc += s[i];
    return acc;
  }
  const std::size_t h = m / 2;
  return pairwise_combine(s, h) + pairwise_combine(s + h, m - h);
}

double tail_sum(const double* x, std::size_t t) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < t; ++i) acc += x[i];
  return acc;
}

double tail_centered_dot(const double* a, const double* b, double ca, double cb,
                         std::size_t t) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < t; ++i) acc += (a[i] - ca) * (b[i] - cb);
  return acc;
}

double tail_gather_sum(const double* v, const std::uint32_t* idx, std::size_t t) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < t; ++i) acc += v[idx[i]];
  return acc;
}

namespace {

inline double block8_tree(const double* p) noexcept {
  return ((p[0] + p[1]) + (p[2] + p[3])) + ((p[4] + p[5]) + (p[6] + p[7]));
}

inline std::vector<double>& scratch(std::size_t n) {
  static thread_local std::vector<double> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

// total = pairwise_combine(block sums) + sequential tail
template <typename BlockFn>
inline double reduce_blocks(std::size_t nblocks, BlockFn&& block, bool has_tail,
                            double tail) noexcept {
  if (nblocks == 0) return tail;
  auto& s = scratch(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) s[b] = block(b);
  double total = pairwise_combine(s.data(), nblocks);
  if (has_tail) total += tail;
  return total;
}

}  // namespace

double sum_scalar(const double* x, std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  const double tail = t ? tail_sum(x + 8 * nblocks, t) : 0.0;
  return reduce_blocks(nblocks, [&](std::size_t b) { return block8_tree(x + 8 * b); }, t != 0,
                       tail);
}

double centered_dot_scalar(const double* a, const double* b, double ca, double cb,
                           std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  const double tail = t ? tail_centered_dot(a + 8 * nblocks, b + 8 * nblocks, ca, cb, t) : 0.0;
  return reduce_blocks(
      nblocks,
      [&](std::size_t blk) {
        const double* pa = a + 8 * blk;
        const double* pb = b + 8 * blk;
        double p[8];
        for (int i = 0; i < 8; ++i) p[i] = (pa[i] - ca) * (pb[i] - cb);
        return block8_tree(p);
      },
      t != 0, tail);
}

double gather_sum_scalar(const double* v, const std::uint32_t* idx, std::size_t n) noexcept {
  const std::size_t nblocks = n / 8;
  const std::size_t t = n % 8;
  const double tail = t ? tail_gather_sum(v, idx + 8 * nblocks, t) : 0.0;
  return reduce_blocks(
      nblocks,
      [&](std::size_t blk) {
        const std::uint32_t* pi = idx + 8 * blk;
        double p[8];
        for (int i = 0; i < 8; ++i) p[i] = v[pi[i]];
        return block8_tree(p);
      },
      t != 0, tail);
}

}  // namespace detail

namespace {

Backend detect_backend() {
  if (const char* env = std::getenv("PSE_KERNELS")) {
    const std::string_view v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
    if (v == "neon" && backend_supported(Backend::neon)) return Backend::neon;
    // "auto" or anything unusable falls through to detection
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (backend_supported(Backend::avx2)) return Backend::avx2;
#elif defined(__aarch64__)
  return Backend::neon;
#endif
  return Backend::scalar;
}

Backend& backend_slot() noexcept {
  static Backend b = detect_backend();
  return b;
}

}  // namespace

bool backend_supported(Backend b) noexcept {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() noexcept { return backend_slot(); }

void set_backend(Backend b) {
  if (!backend_supported(b))
    fail(ErrorCode::invalid_config,
         "kernel backend '" + std::string(backend_name(b)) + "' not supported on this host");
  backend_slot() = b;
}

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

double sum(std::span<const double> x) noexcept {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2: return detail::sum_avx2(x.data(), x.size());
#endif
#if defined(__aarch64__)
    case Backend::neon: return detail::sum_neon(x.data(), x.size());
#endif
    default: return detail::sum_scalar(x.data(), x.size());
  }
}

double centered_dot(std::span<const double> a, double ca, std::span<const double> b,
                    double cb) noexcept {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2: return detail::centered_dot_avx2(a.data(), b.data(), ca, cb, a.size());
#endif
#if defined(__aarch64__)
    case Backend::neon: return detail::centered_dot_neon(a.data(), b.data(), ca, cb, a.size());
#endif
    default: return detail::centered_dot_scalar(a.data(), b.data(), ca, cb, a.size());
  }
}

double gather_sum(std::span<const double> values, std::span<const std::uint32_t> idx) noexcept {
  switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2: return detail::gather_sum_avx2(values.data(), idx.data(), idx.size());
#endif
#if defined(__aarch64__)
    case Backend::neon: return detail::gather_sum_neon(values.data(), idx.data(), idx.size());
#endif
    default: return detail::gather_sum_scalar(values.data(), idx.data(), idx.size());
  }
}

}  // namespace pse::kernels
