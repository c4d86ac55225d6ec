#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "gkdv/modulation.hpp"
#include "gkdv/report.hpp"
#include "gkdv/trace.hpp"

namespace gkdv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Window {
    double t0 = 0.0;
    double t1 = 0.0;
};

// Norm descriptor mirrored in JSON norm reports.
struct NormSpec {
    std::string kind;  // sobolev_hom | sobolev_inhom | lebesgue_spacetime | xsb | weighted_kato
    std::vector<double> params;
    Window window;
};

// ||f||_{H^s} resp. homogeneous ||f||: quadrature of <xi>^{2s} resp.
// |xi|^{2s} weighted spectral mass; the homogeneous version always excludes
// the zero mode (|xi|^s has no finite value there on the box) and for s < 0
// requires |mean(f)| <= mean_tol * rms(f).
double sobolev_norm(const Field& f, double s, bool homogeneous, double mean_tol = 1e-12);

// L^q_t L^r_x over the window: spatial L^r by grid quadrature per frame,
// temporal L^q by trapezoid over frames; q or r = kInf take suprema.
double spacetime_norm(const Trace& tr, double q, double r, Window w);

struct XsbShellProfile {
    std::vector<int> shell_index;   // dyadic k of A_k = {2^k <= |tau - xi^3| < 2^{k+1}}
    std::vector<double> shell_mass; // L^2_{t,x}-unit mass in the shell
    int merged_below = 0;           // shells under the tau resolution folded here
    double tau_max = 0.0;           // |tau| range resolved by the window
};

// Discrete surrogate of the dyadic-modulation norm: the trace is multiplied
// by a smoothstep time taper (ramps over taper_fraction of the window at
// each end), spacetime-transformed, and binned by |tau - xi^3| into dyadic
// shells; returns the l^{q_dyadic} of 2^{bk}-weighted shell masses.
// With b = 0, q = 2 this is the windowed (tapered) spacetime L^2.
// Requires at least 64 frames in the window.
double xsb_norm(const Trace& tr, double b, double q_dyadic, Window w,
                XsbShellProfile* profile = nullptr, double taper_fraction = 0.1);

// int int (|w|^2 [+ |w_x|^2]) e^{-sigma |x - x(t)|} dx dt over the window
// covered by the trace, x(t) interpolated from the path.
double kato_weighted_integral(const Trace& tr, const ModulationPath& path, double sigma,
                              bool with_derivative);

// Mass-transport identity monitor with weight psi(x) = tanh(x / psi_scale):
// residual of
//   d/dt int psi(x - x(t)) u^2 + int (psi' - psi''')(x - x(t)) u^2
//     + 3 int psi'(x - x(t)) u_x^2
// per interior frame (centered time differences).  The identity is exact for
// the free flow along unit-speed paths x(t) = t + const.
Report kato_identity_monitor(const Trace& tr, const ModulationPath& path, double psi_scale);

// || sum m(xi1, xi2) u^(t,xi1) v^(t,xi2) e^{i(xi1+xi2)x} ||_{L^2_{t,x}} with
// m = |xi1 + xi2|^{1/2} |xi1 - xi2|^{1/2} (vanishes on the diagonal).
double bilinear_functional(const Trace& u, const Trace& v, Window w);

// || (P_+ u1)(P_+ u2)(P_- u3)(P_- u4) ||_{L^1_t Hdot^{1/2}_x}; the product is
// formed exactly on the padded grid.  Inputs must be zero-mean.
double quartilinear_functional(const std::array<const Trace*, 4>& u, Window w);

struct EstimateSample {
    std::string functional;
    std::string input;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
};

struct StrichartzEnsembleSpec {
    Grid grid;
    int ensemble_size = 0;
    std::uint64_t seed = 1;
    int band_min = 1;   // excited |k| range of the random data
    int band_max = 8;
    double t_span = 1.0;
    int frames = 65;
};

// Free-flow ratio sampler for the linear estimates: for each random
// zero-mean band-limited sample evolved by the Airy propagator, records the
// ratios  L4t_Linfx / Hdot^{-1/4},  L6tx / Hdot^{-1/6},  and
// LinftL2x, L8tx, L6tLinfx against L^2.
std::vector<EstimateSample> strichartz_constant_sampler(const StrichartzEnsembleSpec& spec);

}  // namespace gkdv
