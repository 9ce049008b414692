#pragma once

#include <cstdint>
#include <random>

namespace spinekit {

using Rng = std::mt19937_64;

/// Independent stream for replicate `index` of a run seeded with `master`.
/// Streams depend only on (master, index), never on scheduling.
inline Rng make_stream(std::uint64_t master, std::uint64_t index) {
  auto splitmix = [](std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t state = master ^ (index * 0xd1342543de82ef95ULL);
  splitmix(state);
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix(state)), static_cast<std::uint32_t>(splitmix(state)),
                    static_cast<std::uint32_t>(splitmix(state)), static_cast<std::uint32_t>(splitmix(state))};
  return Rng(seq);
}

}  // namespace spinekit
