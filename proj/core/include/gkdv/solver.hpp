#pragma once

#include <optional>
#include <vector>

#include "gkdv/field.hpp"
#include "gkdv/trace.hpp"

namespace gkdv {

// Absorbing layer near the box edges: u <- exp(-dt * sigma(x)) u with
// sigma(x) = strength * s(d/width) for d = distance into the layer and s the
// quintic smoothstep; sigma = 0 outside the layer.
struct SpongeConfig {
    double width = 10.0;
    double strength = 1.0;
};

enum class TimeScheme {
    etdrk4,        // Cox-Matthews exponential time differencing (default)
    lawson_ifrk4,  // classical RK4 in the integrating-factor frame
};

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    int nonlinearity_power = 4;
    bool nonlinearity_enabled = true;
    std::optional<SpongeConfig> sponge;  // off by default: breaks conservation
    int snapshot_stride = 1;
    TimeScheme scheme = TimeScheme::etdrk4;
    // Velocity of the integrating frame.  The linear multiplier
    // exp(i t (xi^3 + c xi)) is exact for any c; c = 0 is the pure Airy
    // frame, c = 1 adapts the frame to a unit-speed soliton, which removes
    // the secular part of the time-discretisation error on soliton runs.
    // State and snapshots are always lab-frame.
    double frame_speed = 0.0;
    // dt admissibility: the linear part is exact, so dt is constrained only
    // by the nonlinear term, dt <= cfl_constant / (max|u|^3 * max|xi|).
    double cfl_constant = 0.5;
    double blowup_ceiling_factor = 1e6;  // ceiling = factor * max|u0|
};

struct RunState {
    Field u;            // lab frame, current state
    double time = 0.0;
    Trace trace;
    std::vector<double> mass_history;
    std::vector<double> energy_history;
};

// Free Airy flow: spectral coefficient at xi multiplied by exp(i t xi^3).
// Exactly unitary on L^2.
Field airy_propagate(const Field& u0, double t);

// Conserved quantities of the quartic flow.
double mass_integral(const Field& u);    // int u^2 dx
double energy_integral(const Field& u);  // int u_x^2/2 - u^5/5 dx

double max_stable_dt(const Field& u0, double cfl_constant = 0.5);

// Wrap horizon T_wrap ~ L / (2 v_max): the time before which radiation
// emitted by u0 has not crossed the periodic seam back into the region of
// interest.  v_max combines the fastest Airy group velocity 3 xi_q^2 carried
// by a spectral-mass quantile of u0 with the unit soliton speed.
double wrap_horizon(const Field& u0, double quantile = 0.999);

// One step of dt.  Throws BlowupDetected if max|u| exceeds the configured
// ceiling or turns non-finite.
void step(RunState& state, const SolverConfig& cfg);

// Repeated step with snapshots (and conserved-quantity samples) every
// snapshot_stride steps, the initial state included.
RunState evolve(const Field& u0, const SolverConfig& cfg);

Field apply_sponge(const Field& f, const SpongeConfig& sponge, double dt);

}  // namespace gkdv
