#pragma once

#include <cstdint>

namespace lfr {

// Execution policy for the parallel kernels (simulation replications,
// prediction chain averages). The serial path is the reference
// implementation; both must produce bit-identical results.
enum class Exec { serial, parallel };

// splitmix64: used to derive independent per-replication seeds from a
// single study seed, so replications are reproducible and order-free.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace lfr
