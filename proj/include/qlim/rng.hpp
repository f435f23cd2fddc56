#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qlim {

/// Generator name recorded alongside every seeded result.
inline constexpr std::string_view kGeneratorName = "mt19937_64+splitmix64/box-muller";

/// splitmix64 finalizer; used to derive independent per-index seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Seeded stream whose output is identical on every platform: the engine is
/// fully specified by the standard, and the real/normal transforms are done
/// here rather than by the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Integer in [lo, hi].
  int uniform_int(int lo, int hi) noexcept;
  /// Standard normal (Box-Muller, both outputs used).
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qlim
