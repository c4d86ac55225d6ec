#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

namespace gkdv {

// Periodic spatial grid on [-L/2, L/2) with an even number of collocation
// points and a symmetric retained-mode band for dealiased products.
//
// Points are x_j = -L/2 + j L/M.  Wavenumbers follow the usual DFT layout:
// slot j carries the signed integer mode k(j) = j for j < M/2 and j - M
// otherwise, with xi_k = 2 pi k / L.  The retained band |k| <= dealias_keep
// excludes the Nyquist slot so that the wavenumber set is odd-symmetric
// about zero.
struct Grid {
    double box_length = 0.0;
    int mode_count = 0;
    int dealias_keep = 0;  // max retained |k|; <= mode_count/2 - 1

    double dx() const { return box_length / mode_count; }
    double dxi() const { return 2.0 * std::numbers::pi / box_length; }
    double point(int j) const { return -0.5 * box_length + j * dx(); }
    int signed_index(int j) const { return j < mode_count / 2 ? j : j - mode_count; }
    double wavenumber(int j) const { return dxi() * signed_index(j); }
    double max_retained_wavenumber() const { return dxi() * dealias_keep; }
    bool in_band(int j) const {
        int k = signed_index(j);
        return k >= -dealias_keep && k <= dealias_keep;
    }

    std::vector<double> points() const;
    std::vector<double> wavenumbers() const;

    bool operator==(const Grid&) const = default;
};

// Validates parameters; keep < 0 selects the full odd-symmetric band M/2 - 1.
Grid make_grid(double box_length, int mode_count, int keep = -1);

}  // namespace gkdv
