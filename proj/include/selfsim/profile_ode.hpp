#pragma once

#include <vector>

#include "selfsim/types.hpp"

namespace selfsim::profile {

// Planar curve state in the profile plane: position (x, z), tangent angle
// theta (tangent = (cos theta, sin theta)), arc length s. The normal
// n = (-sin theta, cos theta) completes the positive frame.
struct ProfileState {
    double x = 0;
    double z = 0;
    double theta = 0;
    double s = 0;
};

enum class OdeMethod { FixedRk4, AdaptiveRkf45 };

struct OdeConfig {
    OdeMethod method = OdeMethod::FixedRk4;
    double step = 1e-3;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double max_arc_length = 1e6;
    double derivative_cap = 1e6;
};

enum class Termination { Completed, LengthCapped, DerivativeBlowup };

struct ProfileSolution {
    std::vector<ProfileState> states;
    double max_recompute_residual = 0; // finite-difference theta' vs curvature
    Termination termination = Termination::Completed;
};

// kappa = alpha <n, (x, z)> + lambda with n = (-sin theta, cos theta).
double curvature_at(const ProfileState& state, const SelfSimParams& params);

// Integrates x' = cos theta, z' = sin theta, theta' = kappa over the given
// arc length. Throws StepUnderflow if the adaptive step collapses.
ProfileSolution integrate_profile(const ProfileState& initial, const SelfSimParams& params,
                                  double length, const OdeConfig& config = {});

// Graph form: f'' = (1 + f'^2) alpha (f - x f') + lambda (1 + f'^2)^{3/2}.
struct GraphSolution {
    std::vector<double> xs;
    std::vector<double> f;
    std::vector<double> df;
    Termination termination = Termination::Completed;
    double last_valid_x = 0;
};

double graph_second_derivative(double x, double f, double df, const SelfSimParams& params);

GraphSolution integrate_graph(double f0, double df0, double x_begin, double x_end,
                              const SelfSimParams& params, const OdeConfig& config = {});

// Per-sample residual diagnostics (finite differences of the stored slopes
// against the defining equations; endpoints are reported as zero).
std::vector<double> profile_recompute_residuals(const ProfileSolution& sol,
                                                const SelfSimParams& params);
std::vector<double> graph_recompute_residuals(const GraphSolution& sol,
                                              const SelfSimParams& params);

// Radii of origin-centered circles solving the profile equation: positive
// roots of alpha r^2 - lambda r + 1 = 0, ascending. Requires alpha != 0.
std::vector<double> circle_radii(const SelfSimParams& params);

} // namespace selfsim::profile
