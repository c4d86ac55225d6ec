#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gkdv/field.hpp"

namespace gkdv {

// Time-sampled sequence of Fields; the substrate for spacetime norms.
struct Trace {
    std::vector<double> times;   // strictly increasing
    std::vector<Field> fields;   // one per time, all on one grid
    bool uniform_dt = true;

    size_t frames() const { return times.size(); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    const Grid& grid() const { return fields.front().grid; }
};

void append_frame(Trace& tr, double time, Field f);
void validate_trace(const Trace& tr);

// Index range [first, last] of frames with t0 <= times[i] <= t1.
std::pair<size_t, size_t> frame_range(const Trace& tr, double t0, double t1);

// Directory layout: snapshot_<index>.fld files plus manifest.json listing
// times, the config hash of the producing run, and the conserved-quantity
// history sampled at the same times.
struct TraceManifest {
    std::string config_hash;
    std::vector<double> times;
    std::vector<double> mass_history;
    std::vector<double> energy_history;
};

void save_trace(const std::filesystem::path& dir, const Trace& tr, const TraceManifest& mf);
Trace load_trace(const std::filesystem::path& dir, TraceManifest* manifest_out = nullptr);

}  // namespace gkdv
