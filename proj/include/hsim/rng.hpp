#pragma once

#include <cstdint>
#include <limits>

namespace hsim {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: stream `stream` of key `seed`, independent of call order.
/// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace hsim
