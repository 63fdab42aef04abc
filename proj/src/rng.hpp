#pragma once

#include <cstdint>
#include <random>

namespace snn {

using Rng = std::mt19937;

// splitmix64; used to derive independent stream seeds from a master seed so
// that parallel consumers (augmentation, Poisson encoding, trials) stay
// reproducible regardless of scheduling.
inline uint64_t mix_seed(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t index = 0) {
    return mix_seed(master ^ mix_seed(stream ^ mix_seed(index)));
}

inline Rng make_rng(uint64_t seed) {
    return Rng(static_cast<Rng::result_type>(seed & 0xffffffffull) ^
               static_cast<Rng::result_type>(seed >> 32));
}

}  // namespace snn
