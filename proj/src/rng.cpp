#include "cwm/rng.hpp"

#include <array>

namespace cwm {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t mixed_seed = splitmix64(state);
  state = mixed_seed ^ (stream * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL);
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < words.size(); i += 2) {
    const std::uint64_t v = splitmix64(state);
    words[i] = static_cast<std::uint32_t>(v);
    words[i + 1] = static_cast<std::uint32_t>(v >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

Rng Rng::split(std::uint64_t k) const {
  // Child seeds hash (seed, stream, k) so nested splits stay distinct.
  std::uint64_t state = seed_ ^ (stream_ * 0x9e3779b97f4a7c15ULL);
  const std::uint64_t child_seed = splitmix64(state) ^ (k + 0x632be59bd9b4e019ULL);
  return Rng(child_seed, k);
}

double Rng::uniform() {
  // 53 random bits mapped to the open interval (0, 1).
  return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

std::size_t Rng::index(std::size_t k) {
  std::uniform_int_distribution<std::size_t> dist(0, k - 1);
  return dist(engine_);
}

}  // namespace cwm
