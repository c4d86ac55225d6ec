#pragma once

#include <vector>

#include "gkdv/field.hpp"

namespace gkdv {

// Littlewood-Paley cutoff profile: a fixed even C^2 bump with
// phi(r) = 1 for r <= 1, phi(r) = 0 for r >= base, and the quintic
// smoothstep s(t) = t^3 (10 - 15 t + 6 t^2) ramp in between.  Any smooth
// cutoff with this support works; this concrete choice is pinned so norm
// constants are reproducible.
double lp_bump(double r, double base);

// Low-pass P_{<=N}: multiplies coefficient at xi by phi(|xi|/N).
Field lp_lowpass(const Field& f, double level, double base);

// Band projection P_N := P_{<=N} - P_{<=N/base}.
Field lp_project(const Field& f, double level, double base);

// Geometric levels base^j with base^{j_min} below the lowest nonzero |xi|
// and base^{j_max} above the largest grid |xi|, so that
// P_{<= levels.front()} + sum_{N in levels[1..]} P_N = identity.
std::vector<double> lp_partition_levels(const Grid& grid, double base);

enum class FrequencySign { positive, negative };

// Riesz projection: P_+ keeps xi >= 0 (the zero mode goes to P_+),
// P_- keeps xi < 0.
Field riesz_project(const Field& f, FrequencySign sign);

}  // namespace gkdv
