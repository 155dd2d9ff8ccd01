#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "hsim/errors.hpp"
#include "hsim/io.hpp"
#include "hsim/propagator.hpp"

using namespace hsim;

namespace {
std::filesystem::path tmp(const char* name) { return std::filesystem::temp_directory_path() / name; }
}  // namespace

TEST_CASE("field dump round trip with a little-endian header") {
    const Grid g(2, 32, 12.0);
    const SpectrumModel s{SpectrumKind::gaussian, 1.0, 1.0 / std::numbers::sqrt2, 2};
    const auto f = sample_scaled_potential(g, s, 0.5, 2.0, 0x0123456789abcdefULL);
    const auto path = tmp("hsim_field.bin");
    write_field_dump(path.string(), f);

    CHECK(std::filesystem::file_size(path) == 4 + 4 + 8 + 8 + 8 + 4 + 8 * g.size());
    std::ifstream raw(path, std::ios::binary);
    unsigned char head[4];
    raw.read(reinterpret_cast<char*>(head), 4);
    CHECK(head[0] == 2);
    CHECK(head[1] == 0);

    const auto dump = read_dump(path.string());
    CHECK(dump.header.d == 2);
    CHECK(dump.header.points == 32);
    CHECK(dump.header.length == 12.0);
    CHECK(dump.header.epsilon == 0.5);
    CHECK(dump.header.seed == 0x0123456789abcdefULL);
    CHECK(dump.header.components == 1);
    const auto back = field_from_dump(dump);
    CHECK(back.grid == g);
    CHECK(back.values == f.values);
    CHECK_THROWS_AS(wave_from_dump(dump), Error);
    std::filesystem::remove(path);
}

TEST_CASE("wave snapshot round trip") {
    const Grid g(1, 64, 10.0);
    std::array<double, 1> c{0.5}, p{2.0};
    auto u = init_packet(g, 1.0, c, p);
    u.to_frequency();
    const auto path = tmp("hsim_wave.bin");
    write_wave_snapshot(path.string(), u, 0.25, 9);
    const auto dump = read_dump(path.string());
    CHECK(dump.header.components == 2);
    CHECK(dump.payload.size() == 2 * g.size());
    const auto back = wave_from_dump(dump);
    CHECK(back.rep == Representation::physical);
    CHECK(l2_error(back, u.in_physical()) == 0.0);
    CHECK_THROWS_AS(field_from_dump(dump), Error);
    std::filesystem::remove(path);
}

TEST_CASE("truncated or missing dumps") {
    CHECK_THROWS_AS(read_dump("/nonexistent/dump.bin"), Error);
    const auto path = tmp("hsim_trunc.bin");
    {
        std::ofstream out(path, std::ios::binary);
        out.write("\x03\x00\x00\x00", 4);
    }
    CHECK_THROWS_AS(read_dump(path.string()), Error);
    std::filesystem::remove(path);
}
