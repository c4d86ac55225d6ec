#include "gkdv/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "gkdv/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; add byte swaps for this platform");

namespace gkdv {

namespace {

constexpr std::uint64_t kMagic = 0x31444C4656444B47ull;  // "GKDVFLD1"
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& f, double time) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw RuntimeFailure("write_snapshot: cannot open " + path.string());
    put(os, kMagic);
    put(os, kVersion);
    put(os, static_cast<std::uint64_t>(f.grid.mode_count));
    put(os, f.grid.box_length);
    put(os, time);
    put(os, static_cast<std::uint8_t>(f.rep));
    put(os, static_cast<std::uint8_t>(f.real_valued ? 1 : 0));
    for (const auto& v : f.values) {
        put(os, v.real());
        put(os, v.imag());
    }
    if (!os) throw RuntimeFailure("write_snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw RuntimeFailure("read_snapshot: cannot open " + path.string());
    if (get<std::uint64_t>(is) != kMagic)
        throw RuntimeFailure("read_snapshot: bad magic in " + path.string());
    if (get<std::uint32_t>(is) != kVersion)
        throw RuntimeFailure("read_snapshot: unsupported version in " + path.string());
    const auto m = static_cast<int>(get<std::uint64_t>(is));
    const double box = get<double>(is);
    const double time = get<double>(is);
    const auto rep = static_cast<Representation>(get<std::uint8_t>(is));
    const bool real_valued = get<std::uint8_t>(is) != 0;

    Snapshot snap;
    snap.field = make_field(make_grid(box, m), rep, real_valued);
    snap.time = time;
    for (auto& v : snap.field.values) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        v = {re, im};
    }
    if (!is) throw RuntimeFailure("read_snapshot: truncated file " + path.string());
    return snap;
}

}  // namespace gkdv
