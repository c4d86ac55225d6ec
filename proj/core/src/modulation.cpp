#include "gkdv/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "gkdv/dealias.hpp"
#include "gkdv/errors.hpp"

namespace gkdv {

namespace {

double wrap(double d, double box) { return std::remainder(d, box); }

struct SolitonSample {
    double r;        // R(x)
    double r_x;      // dR/dx
    double d_lambda; // dR/dlambda
};

SolitonSample soliton_sample(double x, double box, const SolitonParams& p) {
    const double lam = p.lambda;
    const double amp = std::pow(lam, -2.0 / 3.0);
    const double d = wrap(x - p.center, box);
    const double y = d / lam;
    const double q = q_value(y);
    const double qp = q_prime_value(y);
    SolitonSample s;
    s.r = amp * q;
    s.r_x = amp * qp / lam;
    s.d_lambda = -(2.0 / 3.0 * s.r + d * s.r_x) / lam;
    return s;
}

double interp(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
    if (ts.empty()) throw ConfigInvalid("modulation path: empty");
    if (t <= ts.front()) return vs.front();
    if (t >= ts.back()) return vs.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const size_t i = static_cast<size_t>(it - ts.begin());
    const double a = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return (1.0 - a) * vs[i - 1] + a * vs[i];
}

// Centered differences, one-sided second order at the ends.
std::vector<double> differentiate_samples(const std::vector<double>& t,
                                          const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 3) return d;
    const double h = t[1] - t[0];
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

}  // namespace

double ModulationPath::x_at(double t) const { return interp(times, x, t); }
double ModulationPath::lambda_at(double t) const { return interp(times, lambda, t); }

double fit_objective(const Field& u, const SolitonParams& p) {
    const Field up = to_physical(u);
    const Grid& g = up.grid;
    double acc = 0.0;
    for (int j = 0; j < g.mode_count; ++j) {
        const double x = g.point(j);
        const double w = std::exp(-std::abs(wrap(x - p.center, g.box_length)));
        const double r = up.values[j].real() - soliton_sample(x, g.box_length, p).r;
        acc += w * r * r;
    }
    return acc * g.dx();
}

SolitonParams fit_parameters(const Field& u, SolitonParams init, const FitOptions& opt) {
    const Field up = to_physical(u);
    const Grid& g = up.grid;
    SolitonParams p = init;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        if (!(p.lambda >= opt.lambda_min && p.lambda <= opt.lambda_max))
            throw FitDiverged("fit_parameters: lambda left [1/4, 4]");
        // Normal equations of the weighted linearised residual, weight frozen
        // at the current center.
        double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
        for (int j = 0; j < g.mode_count; ++j) {
            const double x = g.point(j);
            const SolitonSample s = soliton_sample(x, g.box_length, p);
            const double w = std::exp(-std::abs(wrap(x - p.center, g.box_length)));
            const double res = up.values[j].real() - s.r;
            const double jl = s.d_lambda;
            const double jc = -s.r_x;  // dR/dx_c
            a11 += w * jl * jl;
            a12 += w * jl * jc;
            a22 += w * jc * jc;
            b1 += w * jl * res;
            b2 += w * jc * res;
        }
        const double det = a11 * a22 - a12 * a12;
        if (!(std::abs(det) > 1e-300))
            throw FitDiverged("fit_parameters: singular normal equations");
        const double dl = (a22 * b1 - a12 * b2) / det;
        const double dc = (a11 * b2 - a12 * b1) / det;
        p.lambda += dl;
        p.center += dc;
        if (std::abs(dl) + std::abs(dc) < opt.update_tol) {
            if (!(p.lambda >= opt.lambda_min && p.lambda <= opt.lambda_max))
                throw FitDiverged("fit_parameters: lambda left [1/4, 4]");
            return p;
        }
    }
    throw FitDiverged("fit_parameters: no convergence within iteration budget");
}

Decomposition decompose_trace(const Trace& tr, double eps, const FitOptions& opt,
                              std::optional<SolitonParams> init) {
    validate_trace(tr);
    if (tr.frames() == 0) throw ConfigInvalid("decompose_trace: empty trace");
    const Grid& g = tr.grid();

    SolitonParams warm;
    if (init) {
        warm = *init;
    } else {
        const Field p0 = to_physical(tr.fields[0]);
        int arg = 0;
        double best = -1.0;
        for (int j = 0; j < g.mode_count; ++j)
            if (p0.values[j].real() > best) best = p0.values[j].real(), arg = j;
        warm = SolitonParams{1.0, g.point(arg)};
    }

    Decomposition dec;
    dec.epsilon = eps;
    const double frame_dt = tr.frames() > 1 ? tr.times[1] - tr.times[0] : 0.0;
    double prev_center = warm.center;
    for (size_t i = 0; i < tr.frames(); ++i) {
        SolitonParams fit;
        try {
            fit = fit_parameters(tr.fields[i], warm, opt);
        } catch (const FitDiverged& e) {
            throw FitDiverged(std::string(e.what()) + " at frame " + std::to_string(i),
                              static_cast<long>(i));
        }
        // unwrap onto the branch nearest the previous center
        double center = fit.center;
        if (i > 0)
            center = prev_center + wrap(fit.center - prev_center, g.box_length);
        if (i > 0 && std::abs(center - prev_center) > 2.0 * frame_dt + 1e-9)
            throw FitDiverged("decompose_trace: center jump breaks path continuity",
                              static_cast<long>(i));
        dec.path.times.push_back(tr.times[i]);
        dec.path.lambda.push_back(fit.lambda);
        dec.path.x.push_back(center);
        dec.path.fit_residual.push_back(fit_objective(tr.fields[i], fit));

        Field r = scaled_soliton(g, SolitonParams{fit.lambda, center});
        append_frame(dec.w, tr.times[i], sub(to_physical(tr.fields[i]), r));

        warm = SolitonParams{fit.lambda, center};
        prev_center = center;
    }
    dec.path.lambda_prime = differentiate_samples(dec.path.times, dec.path.lambda);
    dec.path.x_prime = differentiate_samples(dec.path.times, dec.path.x);
    return dec;
}

Field forcing_term(const Decomposition& dec, size_t frame) {
    if (frame >= dec.w.frames()) throw ConfigInvalid("forcing_term: frame out of range");
    const Grid& g = dec.w.grid();
    const double lam = dec.path.lambda[frame];
    const double xc = dec.path.x[frame];
    const double lam_p = dec.path.lambda_prime[frame];
    const double x_p = dec.path.x_prime[frame];
    const SolitonParams p{lam, xc};

    Field r = scaled_soliton(g, p);
    const Field& w = dec.w.fields[frame];

    // (R^4 + w^4 - (R+w)^4)_x, dealiased
    Field gx = derivative(dealiased_quartic_cross(r, w), 1);

    // closed-form R_t + R_xxx + (R^4)_x
    Field expansion = make_field(g, Representation::physical, true);
    const double lam_ratio = lam_p / lam;
    const double speed_defect = x_p - 1.0 / (lam * lam);
    for (int j = 0; j < g.mode_count; ++j) {
        const double x = g.point(j);
        const SolitonSample s = soliton_sample(x, g.box_length, p);
        const double d = wrap(x - xc, g.box_length);
        expansion.values[j] =
            -(2.0 / 3.0) * lam_ratio * s.r - lam_ratio * d * s.r_x - speed_defect * s.r_x;
    }
    return sub(to_physical(gx), expansion);
}

void write_modulation_csv(const std::filesystem::path& path, const ModulationPath& mp) {
    std::ofstream os(path);
    if (!os) throw RuntimeFailure("write_modulation_csv: cannot open " + path.string());
    os << "t,lambda,x,lambda_prime,x_prime,fit_residual\n";
    os << std::setprecision(17);
    for (size_t i = 0; i < mp.times.size(); ++i) {
        os << mp.times[i] << ',' << mp.lambda[i] << ',' << mp.x[i] << ','
           << mp.lambda_prime[i] << ',' << mp.x_prime[i] << ',' << mp.fit_residual[i]
           << '\n';
    }
}

}  // namespace gkdv
