#pragma once

#include <filesystem>
#include <optional>

#include "gkdv/soliton.hpp"
#include "gkdv/trace.hpp"

namespace gkdv {

// Sampled soliton parameters lambda(t), x(t) with centered-difference
// derivative estimates (one-sided second order at the endpoints) and the
// weighted least-squares residual of each fit.  x(t) is unwrapped to a
// continuous path even when the soliton crosses the periodic seam.
struct ModulationPath {
    std::vector<double> times;
    std::vector<double> lambda;
    std::vector<double> x;
    std::vector<double> lambda_prime;
    std::vector<double> x_prime;
    std::vector<double> fit_residual;

    double x_at(double t) const;       // linear interpolation
    double lambda_at(double t) const;
};

// u = R(lambda(t), x(t)) + w, exactly by construction at every frame.
struct Decomposition {
    ModulationPath path;
    Trace w;
    double epsilon = 0.0;
};

struct FitOptions {
    int max_iterations = 50;
    double update_tol = 1e-12;   // |d lambda| + |d x_c| convergence threshold
    double lambda_min = 0.25;
    double lambda_max = 4.0;
};

// Minimises J(lambda, x_c) = int |u - R|^2 e^{-|x - x_c|} dx by Gauss-Newton
// from the warm start, the weight refreshed at the current center each
// iteration.  At convergence u - R is orthogonal to dR/dlambda and dR/dx_c
// in the final weighted inner product.  Throws FitDiverged after
// max_iterations or if lambda leaves [lambda_min, lambda_max].
SolitonParams fit_parameters(const Field& u, SolitonParams init, const FitOptions& opt = {});

// Weighted objective J at given parameters (diagnostic; also the
// fit_residual recorded along the path).
double fit_objective(const Field& u, const SolitonParams& p);

// Framewise fit with warm starts; init defaults to lambda = 1 centered at
// the peak of the first frame.  Enforces path continuity
// |x_c(n) - x_c(n-1)| <= 2 * frame spacing.
Decomposition decompose_trace(const Trace& tr, double eps, const FitOptions& opt = {},
                              std::optional<SolitonParams> init = std::nullopt);

// Forcing term of the w-equation  w_t + w_xxx + (w^4)_x = E at one frame:
//   E = (R^4 + w^4 - (R+w)^4)_x - (R_t + R_xxx + (R^4)_x)
// with the closed-form expansion (exact from the ODE)
//   R_t + R_xxx + (R^4)_x
//     = -(2/3)(lambda'/lambda) R - (lambda'/lambda)(x - x(t)) R_x
//       - (x'(t) - lambda^{-2}) R_x.
Field forcing_term(const Decomposition& dec, size_t frame);

void write_modulation_csv(const std::filesystem::path& path, const ModulationPath& mp);

}  // namespace gkdv
