#include "hsim/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "hsim/errors.hpp"

namespace hsim {

namespace {

template <class T>
void put(std::ostream& out, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    unsigned char b[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(b), sizeof(T))) throw Error("dump: truncated file");
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

void write_header(std::ostream& out, const DumpHeader& h) {
    put(out, h.d);
    put(out, h.points);
    put(out, h.length);
    put(out, h.epsilon);
    put(out, h.seed);
    put(out, h.components);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    return out;
}

}  // namespace

void write_field_dump(const std::string& path, const FieldRealization& field) {
    auto out = open_out(path);
    write_header(out, {static_cast<std::uint32_t>(field.grid.dimension()),
                       static_cast<std::uint32_t>(field.grid.points()), field.grid.length(), field.epsilon,
                       field.seed, 1});
    for (double v : field.values) put(out, v);
}

void write_wave_snapshot(const std::string& path, const WaveFunction& u, double epsilon, std::uint64_t seed) {
    const WaveFunction phys = u.in_physical();
    auto out = open_out(path);
    write_header(out, {static_cast<std::uint32_t>(phys.grid.dimension()),
                       static_cast<std::uint32_t>(phys.grid.points()), phys.grid.length(), epsilon, seed, 2});
    for (const cplx& z : phys.values) {
        put(out, z.real());
        put(out, z.imag());
    }
}

Dump read_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    Dump d;
    d.header.d = get<std::uint32_t>(in);
    d.header.points = get<std::uint32_t>(in);
    d.header.length = get<double>(in);
    d.header.epsilon = get<double>(in);
    d.header.seed = get<std::uint64_t>(in);
    d.header.components = get<std::uint32_t>(in);
    if (d.header.components != 1 && d.header.components != 2) throw Error("dump: bad component count");
    const Grid g(static_cast<int>(d.header.d), static_cast<int>(d.header.points), d.header.length);
    d.payload.resize(g.size() * d.header.components);
    for (double& v : d.payload) v = get<double>(in);
    return d;
}

FieldRealization field_from_dump(const Dump& dump) {
    if (dump.header.components != 1) throw Error("dump: not a real field");
    const Grid g(static_cast<int>(dump.header.d), static_cast<int>(dump.header.points), dump.header.length);
    FieldRealization f = constant_field(g, 0.0);
    f.values = dump.payload;
    f.epsilon = dump.header.epsilon;
    f.seed = dump.header.seed;
    return f;
}

WaveFunction wave_from_dump(const Dump& dump) {
    if (dump.header.components != 2) throw Error("dump: not a complex snapshot");
    const Grid g(static_cast<int>(dump.header.d), static_cast<int>(dump.header.points), dump.header.length);
    WaveFunction u(g);
    for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = {dump.payload[2 * i], dump.payload[2 * i + 1]};
    return u;
}

}  // namespace hsim
