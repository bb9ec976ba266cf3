#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace domconf {

/// Seeded generator with platform-independent output. The engine is
/// std::mt19937_64, whose output sequence the C++ standard pins down; the
/// distributions are implemented here because the standard library ones
/// are allowed to differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), rejection sampled, unbiased.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal deviate (Box-Muller, no cached pair).
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    // Fisher-Yates from the back.
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t value);

/// Child seed for a named stream, e.g. one per problem instance.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace domconf
