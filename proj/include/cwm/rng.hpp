#pragma once

#include <cstdint>
#include <random>

namespace cwm {

/// Seedable generator used everywhere in the library.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the C++
/// standard). Seeds are expanded with SplitMix64 into a std::seed_seq.
/// Streams: `split(k)` derives an independent child generator from the
/// parent seed and the stream index only, so replication k gets the same
/// stream no matter which worker runs it or in which order.
///
/// Algorithm version 1. Changing any of the above must bump kVersion.
class Rng {
 public:
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed = 1, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Child generator for stream `k`; does not advance this generator.
  Rng split(std::uint64_t k) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on (0, 1).
  double uniform();
  double normal() { return normal_(engine_); }
  /// Uniform integer in [0, k).
  std::size_t index(std::size_t k);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace cwm
