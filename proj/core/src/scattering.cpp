#include "gkdv/scattering.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "gkdv/dealias.hpp"
#include "gkdv/errors.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

namespace {

size_t nearest_frame(const Trace& tr, double t) {
    size_t best = 0;
    double dist = std::abs(tr.times[0] - t);
    for (size_t i = 1; i < tr.frames(); ++i) {
        const double d = std::abs(tr.times[i] - t);
        if (d < dist) dist = d, best = i;
    }
    return best;
}

double h1_norm(const Field& f) {
    return sobolev_norm(f, 1.0, false);
}

double hneg16_seminorm(const Field& f, double mean_tol) {
    return sobolev_norm(f, -1.0 / 6.0, true, mean_tol);
}

}  // namespace

Field pullback_state(const Field& w, double t) { return airy_propagate(w, -t); }

Field duhamel_accumulate(const Decomposition& dec, Window window) {
    validate_trace(dec.w);
    const auto [first, last] = frame_range(dec.w, window.t0, window.t1);

    Field acc = to_spectral(dec.w.fields[first]);
    acc = airy_propagate(acc, -dec.w.times[first]);  // pull the start frame back too
    for (size_t i = first; i <= last; ++i) {
        const double t = dec.w.times[i];
        // integrand E - (w^4)_x, pulled back by the free flow
        Field e = forcing_term(dec, i);
        Field w4x = derivative(dealiased_power(dec.w.fields[i], 4), 1);
        Field integrand = to_spectral(sub(e, w4x));
        integrand = airy_propagate(integrand, -t);
        double weight;
        if (i == first)
            weight = 0.5 * (dec.w.times[first + 1] - dec.w.times[first]);
        else if (i == last)
            weight = 0.5 * (dec.w.times[last] - dec.w.times[last - 1]);
        else
            weight = 0.5 * (dec.w.times[i + 1] - dec.w.times[i - 1]);
        for (size_t j = 0; j < acc.values.size(); ++j)
            acc.values[j] += weight * integrand.values[j];
    }
    acc.real_valued = dec.w.fields[first].real_valued;
    return to_physical(acc);
}

double scattering_distance(const Trace& w_tr, const Field& w_plus, double t,
                           double mean_tol) {
    const size_t i = nearest_frame(w_tr, t);
    const Field diff = sub(to_physical(w_tr.fields[i]),
                           to_physical(airy_propagate(w_plus, w_tr.times[i])));
    return h1_norm(diff) + hneg16_seminorm(diff, mean_tol);
}

ScatterDiagnostics pullback_cauchy_distances(const Trace& w_tr,
                                             const std::vector<double>& checkpoint_times,
                                             double trusted_horizon) {
    if (checkpoint_times.size() < 2)
        throw ConfigInvalid("pullback_cauchy_distances: need at least two checkpoints");
    ScatterDiagnostics d;
    d.trusted_horizon = trusted_horizon;
    std::vector<Field> pullbacks;
    for (double t : checkpoint_times) {
        const size_t i = nearest_frame(w_tr, t);
        d.checkpoints.push_back(w_tr.times[i]);
        pullbacks.push_back(pullback_state(w_tr.fields[i], w_tr.times[i]));
    }
    for (size_t i = 0; i + 1 < pullbacks.size(); ++i) {
        const Field diff = sub(to_physical(pullbacks[i + 1]), to_physical(pullbacks[i]));
        d.h1_distance.push_back(h1_norm(diff));
        d.hneg16_distance.push_back(hneg16_seminorm(diff, 1e-3));
    }
    return d;
}

std::vector<double> geometric_checkpoints(double t_first, double ratio, double horizon) {
    if (!(t_first > 0.0) || !(ratio > 1.0))
        throw ConfigInvalid("geometric_checkpoints: need t_first > 0, ratio > 1");
    std::vector<double> ts;
    for (double t = t_first; t <= horizon * (1.0 + 1e-12); t *= ratio) ts.push_back(t);
    if (ts.size() < 2)
        throw ConfigInvalid("geometric_checkpoints: horizon too short for two checkpoints");
    return ts;
}

Report decoupling_check(const Field& u0, double lambda_final, const Field& w_plus) {
    const Grid& g = u0.grid;
    const double mass_u0 = mass_integral(u0);
    const double energy_u0 = energy_integral(u0);
    const double q2 = q_mass(g);
    const double eq = q_energy(g);

    const double mass_w = mass_integral(w_plus);
    const Field wx = derivative(w_plus, 1);
    const double wx2 = mass_integral(wx);

    const double lam13 = std::pow(lambda_final, -1.0 / 3.0);
    const double lam73 = std::pow(lambda_final, -7.0 / 3.0);

    Report r;
    r.title = "decoupling_check";
    r.add("mass_u0", mass_u0, "conserved");
    r.add("mass_residual", mass_u0 - (lam13 * q2 + mass_w),
          "int u0^2 - [lambda^-1/3 int Q^2 + int w_plus^2]");
    r.add("energy_u0", energy_u0, "conserved");
    r.add("energy_residual", energy_u0 - (lam73 * eq + 0.5 * wx2),
          "E[u0] - [lambda^-7/3 E[Q] + int w_plus_x^2 / 2], E[Q] from quadrature oracle");
    r.add("energy_residual_full_weight", energy_u0 - (lam73 * eq + wx2),
          "same with int w_plus_x^2 at full weight, for comparison");
    r.add("energy_residual_printed_tenth", energy_u0 - (lam73 * 0.1 * q2 + 0.5 * wx2),
          "with the +1/10 int Q^2 coefficient, recorded as unconfirmed");
    r.add("lambda_final", lambda_final, "last trusted frame");
    r.add("cross_term_bound", std::abs(mass_u0 - lam13 * q2 - mass_w),
          "|2 int R w| at the final frame equals the mass residual");
    return r;
}

void write_distances_csv(const std::filesystem::path& path, const ScatterDiagnostics& d) {
    std::ofstream os(path);
    if (!os) throw RuntimeFailure("write_distances_csv: cannot open " + path.string());
    os << "checkpoint,H1_dist,Hneg16_dist\n" << std::setprecision(17);
    for (size_t i = 0; i + 1 < d.checkpoints.size(); ++i)
        os << d.checkpoints[i + 1] << ',' << d.h1_distance[i] << ',' << d.hneg16_distance[i]
           << '\n';
}

}  // namespace gkdv
