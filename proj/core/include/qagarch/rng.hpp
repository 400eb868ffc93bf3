#pragma once

#include <cstdint>
#include <random>

namespace qagarch {

/// Seed-deterministic standard normal source.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniforms take the top 53 bits; normals use the Marsaglia polar
/// method. std::normal_distribution is avoided because its algorithm differs
/// between standard libraries, which would break cross-platform reproducibility.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double standard_normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stable per-replication seed from (master seed, scenario index, replication index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t scenario_index,
                          std::uint64_t replication_index) noexcept;

}  // namespace qagarch
