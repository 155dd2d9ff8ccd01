#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsim/field.hpp"
#include "hsim/grid.hpp"

namespace hsim {

/// Flat binary dump: little-endian header (u32 d, u32 N, f64 L, f64 eps,
/// u64 seed, u32 components) followed by row-major f64 values; complex
/// payloads are interleaved (re, im) pairs.
struct DumpHeader {
    std::uint32_t d = 0;
    std::uint32_t points = 0;
    double length = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::uint32_t components = 1;  ///< 1 real, 2 complex
};

struct Dump {
    DumpHeader header;
    std::vector<double> payload;
};

void write_field_dump(const std::string& path, const FieldRealization& field);
/// Snapshot in physical representation.
void write_wave_snapshot(const std::string& path, const WaveFunction& u, double epsilon, std::uint64_t seed);
Dump read_dump(const std::string& path);

/// Reconstructs a field from a real dump (spectrum metadata is not stored).
FieldRealization field_from_dump(const Dump& dump);
WaveFunction wave_from_dump(const Dump& dump);

}  // namespace hsim
