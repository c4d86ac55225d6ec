#pragma once

#include "gkdv/field.hpp"

namespace gkdv {

// Exact dealiasing by zero-padding.  A product of p fields band-limited to
// |k| <= K has spectral content up to p*K; on a padded grid of P points the
// first alias into the retained band comes from |k'| = P - K, so
// P >= (p+1)*K + 1 eliminates every aliased contribution.  The 2/3 rule
// covers only p = 2; quartic products need the 5K+1 bound implemented here.
int dealias_pad_size(int band_limit, int power);

// f^power on the padded grid, truncated back to the grid's retained band.
// Output representation matches the input's.
Field dealiased_power(const Field& f, int power);

// a^4 + b^4 - (a+b)^4, dealiased and truncated to the retained band,
// evaluated in the numerically benign expanded form
// -(4 a^3 b + 6 a^2 b^2 + 4 a b^3).
Field dealiased_quartic_cross(const Field& a, const Field& b);

// Exact pointwise product of four band-limited fields, returned in spectral
// representation on the padded grid so that no genuine high-frequency
// content of the product is discarded (needed by spacetime norm
// functionals of products).
Field exact_product4(const Field& a, const Field& b, const Field& c, const Field& d);

namespace testhooks {
// When set, dealiased_power pads only to the quadratic (2/3-rule) size.
// Exists so the verification suite can demonstrate that the quartic
// convolution oracle actually catches aliasing faults.
extern bool sabotage_dealiasing;
}  // namespace testhooks

}  // namespace gkdv
