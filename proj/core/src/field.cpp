#include "gkdv/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gkdv/errors.hpp"
#include "gkdv/fft.hpp"

namespace gkdv {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_same_grid(const Field& a, const Field& b, const char* who) {
    if (!(a.grid == b.grid)) throw ConfigInvalid(std::string(who) + ": grid mismatch");
    if (a.rep != b.rep) throw ConfigInvalid(std::string(who) + ": representation mismatch");
}
}  // namespace

Field make_field(const Grid& grid, Representation rep, bool real_valued) {
    Field f;
    f.grid = grid;
    f.values.assign(static_cast<size_t>(grid.mode_count), cdouble{0.0, 0.0});
    f.rep = rep;
    f.real_valued = real_valued;
    return f;
}

Field transform(const Field& f, Representation target) {
    if (f.rep == target) return f;
    const int m = f.grid.mode_count;
    Field out = f;
    out.rep = target;
    if (target == Representation::spectral) {
        fft::dft(f.values, out.values, -1);
        const double s = f.grid.dx() / two_pi;
        for (int j = 0; j < m; ++j)
            out.values[j] *= (j % 2 == 0) ? s : -s;  // (-1)^k from the -L/2 origin
    } else {
        std::vector<cdouble> tmp(f.values.size());
        for (int j = 0; j < m; ++j)
            tmp[j] = (j % 2 == 0) ? f.values[j] : -f.values[j];
        fft::dft(tmp, out.values, +1);
        const double s = f.grid.dxi();
        for (auto& v : out.values) v *= s;
        if (f.real_valued)
            for (auto& v : out.values) v = cdouble{v.real(), 0.0};
    }
    return out;
}

Field to_spectral(const Field& f) { return transform(f, Representation::spectral); }
Field to_physical(const Field& f) { return transform(f, Representation::physical); }

Field derivative(const Field& f, int order) {
    if (order < 0) throw ConfigInvalid("derivative: order must be nonnegative");
    if (order == 0) return f;
    Field g = to_spectral(f);
    const int m = g.grid.mode_count;
    for (int j = 0; j < m; ++j) {
        if (g.grid.signed_index(j) == -m / 2 && order % 2 == 1) {
            g.values[j] = 0.0;
            continue;
        }
        const cdouble ik{0.0, g.grid.wavenumber(j)};
        cdouble mult{1.0, 0.0};
        for (int p = 0; p < order; ++p) mult *= ik;
        g.values[j] *= mult;
    }
    Field out = (f.rep == Representation::physical) ? to_physical(g) : g;
    return out;
}

Field fractional_derivative(const Field& f, double s, double mean_tol) {
    Field g = to_spectral(f);
    if (s < 0.0) {
        const double rms = l2_norm(f) / std::sqrt(f.grid.box_length);
        if (std::abs(mean_value(f)) > mean_tol * std::max(rms, 1e-300))
            throw NegativeOrderOnNonzeroMean(
                "fractional_derivative: negative order requires zero-mean data");
    }
    const int m = g.grid.mode_count;
    for (int j = 0; j < m; ++j) {
        const double xi = g.grid.wavenumber(j);
        if (xi == 0.0) {
            g.values[j] = 0.0;
        } else {
            g.values[j] *= std::pow(std::abs(xi), s);
        }
    }
    Field out = (f.rep == Representation::physical) ? to_physical(g) : g;
    return out;
}

Field add(const Field& a, const Field& b) {
    check_same_grid(a, b, "add");
    Field out = a;
    out.real_valued = a.real_valued && b.real_valued;
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

Field sub(const Field& a, const Field& b) {
    check_same_grid(a, b, "sub");
    Field out = a;
    out.real_valued = a.real_valued && b.real_valued;
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

Field scale(const Field& f, double c) {
    Field out = f;
    for (auto& v : out.values) v *= c;
    return out;
}

Field scale(const Field& f, cdouble c) {
    Field out = f;
    out.real_valued = f.real_valued && c.imag() == 0.0;
    for (auto& v : out.values) v *= c;
    return out;
}

double mean_value(const Field& f) {
    if (f.rep == Representation::spectral) {
        // coef_0 = (1/2pi) int f dx
        return (two_pi * f.values[0] / f.grid.box_length).real();
    }
    cdouble acc{0.0, 0.0};
    for (const auto& v : f.values) acc += v;
    return (acc / static_cast<double>(f.grid.mode_count)).real();
}

double l2_norm(const Field& f) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::norm(v);
    if (f.rep == Representation::physical) return std::sqrt(acc * f.grid.dx());
    return std::sqrt(acc * two_pi * f.grid.dxi());
}

double l2_distance(const Field& a, const Field& b) {
    check_same_grid(a, b, "l2_distance");
    double acc = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
    const double w = (a.rep == Representation::physical) ? a.grid.dx()
                                                         : two_pi * a.grid.dxi();
    return std::sqrt(acc * w);
}

double max_abs(const Field& f) {
    const Field p = to_physical(f);
    double m = 0.0;
    for (const auto& v : p.values) m = std::max(m, std::abs(v));
    return m;
}

bool finite_values(const Field& f) {
    for (const auto& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

Field field_from_samples(const Grid& grid, std::span<const double> samples) {
    if (static_cast<int>(samples.size()) != grid.mode_count)
        throw ConfigInvalid("field_from_samples: sample count mismatch");
    Field f = make_field(grid, Representation::physical, true);
    for (size_t j = 0; j < samples.size(); ++j) f.values[j] = samples[j];
    return f;
}

std::vector<double> real_samples(const Field& f) {
    const Field p = to_physical(f);
    std::vector<double> out(p.values.size());
    for (size_t j = 0; j < out.size(); ++j) out[j] = p.values[j].real();
    return out;
}

}  // namespace gkdv
