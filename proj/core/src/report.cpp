#include "gkdv/report.hpp"

#include "gkdv/errors.hpp"

namespace gkdv {

double Report::value(const std::string& name) const {
    const ReportEntry* e = find(name);
    if (!e) throw UnknownQuantity("report '" + title + "': no entry named " + name);
    return e->value;
}

nlohmann::json to_json(const Report& r) {
    nlohmann::json j;
    j["title"] = r.title;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : r.entries)
        j["entries"].push_back({{"name", e.name}, {"value", e.value}, {"provenance", e.provenance}});
    return j;
}

}  // namespace gkdv
