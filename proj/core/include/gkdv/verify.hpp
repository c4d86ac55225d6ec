#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gkdv/report.hpp"

namespace gkdv {

enum class VerifyLevel { quick, full };

struct CriterionCheck {
    std::string metric;
    double value = 0.0;
    std::string relation;  // "<=", ">=", "in"
    double bound_lo = 0.0;
    double bound_hi = 0.0;
    bool passed = false;
    bool informational = false;  // recorded, not gated
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = true;
    double seconds = 0.0;
    std::vector<CriterionCheck> checks;
};

// Runs the verification catalog.  quick: the sub-second criteria plus
// determinism; full: everything, including the epsilon sweep and the
// scattering runs.  scratch_dir holds run artifacts.
std::vector<CriterionResult> run_verification(VerifyLevel level,
                                              const std::filesystem::path& scratch_dir);

Report verification_report(const std::vector<CriterionResult>& results);

// One line per criterion: "[PASS] 4 soliton-transport (12.3s)" plus one
// indented line per check with value and bound.
std::string format_verification(const std::vector<CriterionResult>& results);

}  // namespace gkdv
