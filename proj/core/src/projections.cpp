#include "gkdv/projections.hpp"

#include <cmath>

#include "gkdv/errors.hpp"

namespace gkdv {

double lp_bump(double r, double base) {
    r = std::abs(r);
    if (r <= 1.0) return 1.0;
    if (r >= base) return 0.0;
    const double t = (base - r) / (base - 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

namespace {

Field apply_multiplier(const Field& f, double base, double level_hi, double level_lo) {
    if (!(base > 1.0)) throw ConfigInvalid("lp projection: base must exceed 1");
    if (!(level_hi > 0.0)) throw ConfigInvalid("lp projection: level must be positive");
    Field g = to_spectral(f);
    for (size_t j = 0; j < g.values.size(); ++j) {
        const double axi = std::abs(g.grid.wavenumber(static_cast<int>(j)));
        double m = lp_bump(axi / level_hi, base);
        if (level_lo > 0.0) m -= lp_bump(axi / level_lo, base);
        g.values[j] *= m;
    }
    return (f.rep == Representation::physical) ? to_physical(g) : g;
}

}  // namespace

Field lp_lowpass(const Field& f, double level, double base) {
    return apply_multiplier(f, base, level, 0.0);
}

Field lp_project(const Field& f, double level, double base) {
    return apply_multiplier(f, base, level, level / base);
}

std::vector<double> lp_partition_levels(const Grid& grid, double base) {
    if (!(base > 1.0)) throw ConfigInvalid("lp_partition_levels: base must exceed 1");
    const double lo = grid.dxi();                      // lowest nonzero |xi|
    const double hi = grid.dxi() * (grid.mode_count / 2);
    // levels are powers of `base`
    const int j_min = static_cast<int>(std::floor(std::log(lo) / std::log(base))) - 1;
    const int j_max = static_cast<int>(std::ceil(std::log(hi) / std::log(base))) + 1;
    std::vector<double> levels;
    levels.reserve(static_cast<size_t>(j_max - j_min + 1));
    for (int j = j_min; j <= j_max; ++j) levels.push_back(std::pow(base, j));
    return levels;
}

Field riesz_project(const Field& f, FrequencySign sign) {
    Field g = to_spectral(f);
    for (size_t j = 0; j < g.values.size(); ++j) {
        const double xi = g.grid.wavenumber(static_cast<int>(j));
        const bool keep = (sign == FrequencySign::positive) ? (xi >= 0.0) : (xi < 0.0);
        if (!keep) g.values[j] = 0.0;
    }
    g.real_valued = false;  // half-line spectra are generically complex
    return (f.rep == Representation::physical) ? to_physical(g) : g;
}

}  // namespace gkdv
