#pragma once

#include <cstdint>

namespace cxr {

/// xorshift64* generator. Portable and bit-reproducible across platforms,
/// which the standard distributions are not.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform();
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace cxr
