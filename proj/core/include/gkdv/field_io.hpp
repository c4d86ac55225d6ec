#pragma once

#include <filesystem>

#include "gkdv/field.hpp"

namespace gkdv {

// Binary Field snapshot, bit-exact across platforms (little-endian):
//   magic   u64   0x3144_4C46_5644_4B47  ("GKDVFLD1" as LE bytes)
//   version u32   1
//   M       u64   mode count
//   L       f64   box length
//   t       f64   time stamp
//   representation u8   0 = physical, 1 = spectral
//   real_valued    u8   0/1
//   payload M * (f64 re, f64 im)
struct Snapshot {
    Field field;
    double time = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const Field& f, double time);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace gkdv
