#include "gkdv/grid.hpp"

#include "gkdv/errors.hpp"

namespace gkdv {

std::vector<double> Grid::points() const {
    std::vector<double> xs(mode_count);
    for (int j = 0; j < mode_count; ++j) xs[j] = point(j);
    return xs;
}

std::vector<double> Grid::wavenumbers() const {
    std::vector<double> xis(mode_count);
    for (int j = 0; j < mode_count; ++j) xis[j] = wavenumber(j);
    return xis;
}

Grid make_grid(double box_length, int mode_count, int keep) {
    if (!(box_length > 0.0)) throw ConfigInvalid("grid: box_length must be positive");
    if (mode_count <= 0 || mode_count % 2 != 0)
        throw ConfigInvalid("grid: mode_count must be a positive even integer");
    if (keep < 0) keep = mode_count / 2 - 1;
    if (keep > mode_count / 2 - 1)
        throw ConfigInvalid("grid: dealias_keep exceeds the odd-symmetric band");
    if (keep < 1) throw ConfigInvalid("grid: dealias_keep must be >= 1");
    return Grid{box_length, mode_count, keep};
}

}  // namespace gkdv
