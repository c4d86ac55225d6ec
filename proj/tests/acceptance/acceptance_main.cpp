// Acceptance suite: runs the full verification catalog and prints one
// pass/fail line per criterion with the measured values.  Exit code 0 only
// when every criterion passes.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "gkdv/verify.hpp"

int main() {
    const std::filesystem::path scratch =
        std::filesystem::temp_directory_path() / "gkdv_acceptance";
    std::filesystem::remove_all(scratch);

    const auto results = gkdv::run_verification(gkdv::VerifyLevel::full, scratch);
    std::cout << gkdv::format_verification(results);

    int failed = 0;
    for (const auto& r : results)
        if (!r.passed) ++failed;
    if (failed) {
        std::cout << failed << " criterion(s) failed\n";
        return 1;
    }
    return 0;
}
