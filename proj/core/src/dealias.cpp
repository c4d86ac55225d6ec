#include "gkdv/dealias.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gkdv/errors.hpp"
#include "gkdv/fft.hpp"

namespace gkdv {

namespace testhooks {
bool sabotage_dealiasing = false;
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

int padded_slot(int k, int pad) { return k >= 0 ? k : k + pad; }

// Collocation values of a band-limited field on the refined grid of `pad`
// points spanning the same box.  Coefficients are the continuum-convention
// densities, so no rescaling is needed when changing the point count.
std::vector<cdouble> padded_physical(const Field& f, int pad) {
    const Field s = to_spectral(f);
    const Grid& g = s.grid;
    std::vector<cdouble> spec(static_cast<size_t>(pad), cdouble{0.0, 0.0});
    for (int j = 0; j < g.mode_count; ++j) {
        const int k = g.signed_index(j);
        if (k < -g.dealias_keep || k > g.dealias_keep) continue;
        const int slot = padded_slot(k, pad);
        spec[slot] = (slot % 2 == 0) ? s.values[j] : -s.values[j];  // (-1)^k
    }
    std::vector<cdouble> phys(static_cast<size_t>(pad));
    fft::dft(spec, phys, +1);
    const double dxi = g.dxi();
    for (auto& v : phys) v *= dxi;
    return phys;
}

// Forward transform on the padded grid; harvest modes with |k| <= band into
// a spectral Field on `grid`.
Field truncate_to_grid(const std::vector<cdouble>& phys, int pad, const Grid& grid,
                       bool real_valued) {
    std::vector<cdouble> spec(static_cast<size_t>(pad));
    fft::dft(phys, spec, -1);
    const double scale = grid.box_length / pad / two_pi;
    Field out = make_field(grid, Representation::spectral, real_valued);
    for (int j = 0; j < grid.mode_count; ++j) {
        const int k = grid.signed_index(j);
        if (k < -grid.dealias_keep || k > grid.dealias_keep) continue;
        const int slot = padded_slot(k, pad);
        const cdouble v = spec[slot] * scale;
        out.values[j] = (slot % 2 == 0) ? v : -v;
    }
    return out;
}

}  // namespace

int dealias_pad_size(int band_limit, int power) {
    if (band_limit < 1 || power < 1) throw ConfigInvalid("dealias_pad_size: bad arguments");
    int pad = fft::next_fast_size((power + 1) * band_limit + 1);
    while (pad % 2 != 0) pad = fft::next_fast_size(pad + 1);
    return pad;
}

Field dealiased_power(const Field& f, int power) {
    if (power < 1) throw ConfigInvalid("dealiased_power: power must be >= 1");
    const Grid& g = f.grid;
    int pad = dealias_pad_size(g.dealias_keep, power);
    if (testhooks::sabotage_dealiasing)
        pad = fft::next_fast_size(3 * g.dealias_keep + 1);
    std::vector<cdouble> phys = padded_physical(f, pad);
    for (auto& v : phys) {
        cdouble p = v;
        for (int i = 1; i < power; ++i) p *= v;
        v = p;
    }
    Field out = truncate_to_grid(phys, pad, g, f.real_valued);
    return (f.rep == Representation::physical) ? to_physical(out) : out;
}

Field dealiased_quartic_cross(const Field& a, const Field& b) {
    if (!(a.grid == b.grid)) throw ConfigInvalid("dealiased_quartic_cross: grid mismatch");
    const Grid& g = a.grid;
    const int pad = dealias_pad_size(g.dealias_keep, 4);
    std::vector<cdouble> pa = padded_physical(a, pad);
    std::vector<cdouble> pb = padded_physical(b, pad);
    for (size_t i = 0; i < pa.size(); ++i) {
        const cdouble x = pa[i], y = pb[i];
        pa[i] = -(4.0 * x * x * x * y + 6.0 * x * x * y * y + 4.0 * x * y * y * y);
    }
    Field out = truncate_to_grid(pa, pad, g, a.real_valued && b.real_valued);
    return (a.rep == Representation::physical) ? to_physical(out) : out;
}

Field exact_product4(const Field& a, const Field& b, const Field& c, const Field& d) {
    const Grid& g = a.grid;
    if (!(b.grid == g) || !(c.grid == g) || !(d.grid == g))
        throw ConfigInvalid("exact_product4: grid mismatch");
    const int pad = dealias_pad_size(g.dealias_keep, 4);
    std::vector<cdouble> pa = padded_physical(a, pad);
    const std::vector<cdouble> pb = padded_physical(b, pad);
    const std::vector<cdouble> pc = padded_physical(c, pad);
    const std::vector<cdouble> pd = padded_physical(d, pad);
    for (size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i] * pc[i] * pd[i];

    // pad is even by construction, so the padded grid is itself a valid Grid.
    Grid fine = make_grid(g.box_length, pad, std::min(4 * g.dealias_keep, pad / 2 - 1));
    return truncate_to_grid(pa, pad, fine,
                            a.real_valued && b.real_valued && c.real_valued && d.real_valued);
}

}  // namespace gkdv
