#include "gkdv/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gkdv/errors.hpp"
#include "gkdv/field_io.hpp"

namespace gkdv {

void append_frame(Trace& tr, double time, Field f) {
    if (!tr.times.empty()) {
        if (time <= tr.times.back())
            throw ConfigInvalid("trace: times must be strictly increasing");
        if (!(f.grid == tr.fields.front().grid))
            throw ConfigInvalid("trace: all fields must share one grid");
    }
    tr.times.push_back(time);
    tr.fields.push_back(std::move(f));
}

void validate_trace(const Trace& tr) {
    if (tr.times.size() != tr.fields.size())
        throw ConfigInvalid("trace: times/fields length mismatch");
    for (size_t i = 1; i < tr.times.size(); ++i) {
        if (!(tr.times[i] > tr.times[i - 1]))
            throw ConfigInvalid("trace: times must be strictly increasing");
        if (!(tr.fields[i].grid == tr.fields[0].grid))
            throw ConfigInvalid("trace: all fields must share one grid");
    }
}

std::pair<size_t, size_t> frame_range(const Trace& tr, double t0, double t1) {
    const double eps = 1e-9 * std::max(1.0, std::abs(t1));
    size_t first = tr.times.size(), last = 0;
    for (size_t i = 0; i < tr.times.size(); ++i) {
        if (tr.times[i] >= t0 - eps && tr.times[i] <= t1 + eps) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    if (first > last || first == tr.times.size())
        throw WindowTooShort("frame_range: no frames inside window");
    return {first, last};
}

namespace {
std::string snapshot_name(size_t index) {
    std::ostringstream os;
    os << "snapshot_" << std::setw(6) << std::setfill('0') << index << ".fld";
    return os.str();
}
}  // namespace

void save_trace(const std::filesystem::path& dir, const Trace& tr, const TraceManifest& mf) {
    std::filesystem::create_directories(dir);
    for (size_t i = 0; i < tr.frames(); ++i)
        write_snapshot(dir / snapshot_name(i), tr.fields[i], tr.times[i]);
    nlohmann::json j;
    j["config_hash"] = mf.config_hash;
    j["times"] = tr.times;
    j["mass_history"] = mf.mass_history;
    j["energy_history"] = mf.energy_history;
    std::ofstream os(dir / "manifest.json");
    os << j.dump(2) << "\n";
    if (!os) throw RuntimeFailure("save_trace: manifest write failed");
}

Trace load_trace(const std::filesystem::path& dir, TraceManifest* manifest_out) {
    std::ifstream is(dir / "manifest.json");
    if (!is) throw RuntimeFailure("load_trace: missing manifest in " + dir.string());
    nlohmann::json j = nlohmann::json::parse(is);
    TraceManifest mf;
    mf.config_hash = j.value("config_hash", "");
    mf.times = j.at("times").get<std::vector<double>>();
    mf.mass_history = j.value("mass_history", std::vector<double>{});
    mf.energy_history = j.value("energy_history", std::vector<double>{});

    Trace tr;
    for (size_t i = 0; i < mf.times.size(); ++i) {
        Snapshot snap = read_snapshot(dir / snapshot_name(i));
        append_frame(tr, snap.time, std::move(snap.field));
    }
    if (tr.frames() > 2) {
        const double d = tr.times[1] - tr.times[0];
        for (size_t i = 2; i < tr.frames(); ++i)
            if (std::abs(tr.times[i] - tr.times[i - 1] - d) > 1e-9 * std::max(1.0, d))
                tr.uniform_dt = false;
    }
    if (manifest_out) *manifest_out = std::move(mf);
    return tr;
}

}  // namespace gkdv
