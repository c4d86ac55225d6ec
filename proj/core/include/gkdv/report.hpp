#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace gkdv {

// Named scalar diagnostics with provenance, serialized per run.
struct ReportEntry {
    std::string name;
    double value = 0.0;
    std::string provenance;  // how the number was produced (quadrature, oracle, ...)
};

struct Report {
    std::string title;
    std::vector<ReportEntry> entries;

    void add(std::string name, double value, std::string provenance = "") {
        entries.push_back({std::move(name), value, std::move(provenance)});
    }
    const ReportEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
    double value(const std::string& name) const;
};

nlohmann::json to_json(const Report& r);

}  // namespace gkdv
