#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "gkdv/grid.hpp"

namespace gkdv {

using cdouble = std::complex<double>;

enum class Representation : std::uint8_t { physical = 0, spectral = 1 };

// One spatial state with paired physical/spectral representations.
//
// Discrete transform convention (fixed once, all norms are defined against
// it): the spectral slot j holds the coefficient
//
//     coef_k = (dx / 2 pi) sum_j u(x_j) e^{-i x_j xi_k},   xi_k = 2 pi k / L,
//
// i.e. the trapezoidal discretisation of the continuum transform
// (1/2pi) int e^{-i x xi} u dx, and inversion is
//
//     u(x_j) = dxi * sum_k coef_k e^{+i x_j xi_k}.
//
// A single Fourier mode e^{i xi_k x} therefore has coefficient 1/dxi in
// slot k, and Parseval reads  int |u|^2 dx = 2 pi dxi sum_k |coef_k|^2.
// Box-size changes rescale coefficients exactly like the continuum density
// f-hat(xi), which is what makes scaling-symmetry tests exact.
struct Field {
    Grid grid;
    std::vector<cdouble> values;  // length grid.mode_count
    Representation rep = Representation::physical;
    bool real_valued = true;
};

Field make_field(const Grid& grid, Representation rep = Representation::physical,
                 bool real_valued = true);

// Representation conversion; returns the input unchanged if already there.
Field transform(const Field& f, Representation target);
Field to_spectral(const Field& f);
Field to_physical(const Field& f);

// d^order/dx^order via multiplication by (i xi)^order.  The Nyquist slot is
// zeroed for odd orders to keep real data real (odd-symmetric band).
Field derivative(const Field& f, int order);

// |nabla|^s: coefficient k scaled by |xi_k|^s, zero mode mapped to 0.
// For s < 0 throws NegativeOrderOnNonzeroMean when |mean(f)| exceeds
// mean_tol * rms(f); the box has no finite |xi|^s weight at xi = 0.
Field fractional_derivative(const Field& f, double s, double mean_tol = 1e-12);

// Pointwise helpers (grids must match).
Field add(const Field& a, const Field& b);
Field sub(const Field& a, const Field& b);
Field scale(const Field& f, double c);
Field scale(const Field& f, cdouble c);

double mean_value(const Field& f);          // (1/L) int f dx
double l2_norm(const Field& f);             // sqrt(int |f|^2 dx)
double l2_distance(const Field& a, const Field& b);
double max_abs(const Field& f);             // L-infinity on collocation points
bool finite_values(const Field& f);

// Evaluates real samples into a real-valued physical Field.
Field field_from_samples(const Grid& grid, std::span<const double> samples);
std::vector<double> real_samples(const Field& f);

}  // namespace gkdv
