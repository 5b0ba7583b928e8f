#include "selfsim/profile_ode.hpp"

#include <algorithm>
#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/numeric.hpp"

namespace selfsim::profile {

using numeric::OdeState;

double curvature_at(const ProfileState& state, const SelfSimParams& params) {
    const double nx = -std::sin(state.theta), nz = std::cos(state.theta);
    return params.alpha * (nx * state.x + nz * state.z) + params.lambda;
}

namespace {

// Non-uniform three-point estimate of dtheta/ds at the middle node.
double central_slope(double s0, double y0, double s1, double y1, double s2, double y2) {
    const double h1 = s1 - s0, h2 = s2 - s1;
    return -y0 * h2 / (h1 * (h1 + h2)) + y1 * (h2 - h1) / (h1 * h2) + y2 * h1 / (h2 * (h1 + h2));
}

} // namespace

ProfileSolution integrate_profile(const ProfileState& initial, const SelfSimParams& params,
                                  double length, const OdeConfig& config) {
    if (!(length > 0)) throw Error("integrate_profile: length must be positive");
    ProfileSolution sol;
    double span = length;
    if (span > config.max_arc_length) {
        span = config.max_arc_length;
        sol.termination = Termination::LengthCapped;
    }

    const long double alpha = params.alpha, lambda = params.lambda;
    auto rhs = [alpha, lambda](long double, const OdeState<3>& y) {
        const long double th = y[2];
        const long double kappa = alpha * (-y[0] * sinl(th) + y[1] * cosl(th)) + lambda;
        return OdeState<3>{cosl(th), sinl(th), kappa};
    };
    OdeState<3> y{initial.x, initial.z, initial.theta};
    auto record = [&](long double s, const OdeState<3>& st) {
        sol.states.push_back(
            {(double)st[0], (double)st[1], (double)st[2], (double)(initial.s + s)});
        return true;
    };
    if (config.method == OdeMethod::FixedRk4) {
        numeric::rk4_integrate<3>(rhs, y, 0.0L, (long double)span, (long double)config.step, record);
    } else {
        numeric::rkf45_integrate<3>(rhs, y, 0.0L, (long double)span, config.abs_tol,
                                    config.rel_tol, record);
    }

    const auto res = profile_recompute_residuals(sol, params);
    for (double r : res) sol.max_recompute_residual = std::max(sol.max_recompute_residual, std::abs(r));
    return sol;
}

std::vector<double> profile_recompute_residuals(const ProfileSolution& sol,
                                                const SelfSimParams& params) {
    const auto& st = sol.states;
    std::vector<double> out(st.size(), 0.0);
    for (std::size_t i = 1; i + 1 < st.size(); ++i) {
        const double slope =
            central_slope(st[i - 1].s, st[i - 1].theta, st[i].s, st[i].theta, st[i + 1].s, st[i + 1].theta);
        out[i] = slope - curvature_at(st[i], params);
    }
    return out;
}

double graph_second_derivative(double x, double f, double df, const SelfSimParams& params) {
    const double w = 1.0 + df * df;
    return w * params.alpha * (f - x * df) + params.lambda * w * std::sqrt(w);
}

GraphSolution integrate_graph(double f0, double df0, double x_begin, double x_end,
                              const SelfSimParams& params, const OdeConfig& config) {
    if (!(x_end > x_begin)) throw Error("integrate_graph: x range must be increasing");
    GraphSolution sol;
    double span = x_end - x_begin;
    if (span > config.max_arc_length) {
        span = config.max_arc_length;
        sol.termination = Termination::LengthCapped;
    }

    const long double alpha = params.alpha, lambda = params.lambda;
    const long double xb = x_begin;
    auto rhs = [alpha, lambda, xb](long double t, const OdeState<2>& y) {
        const long double p = y[1];
        const long double w = 1.0L + p * p;
        const long double fpp = w * alpha * (y[0] - (xb + t) * p) + lambda * w * sqrtl(w);
        return OdeState<2>{p, fpp};
    };
    OdeState<2> y{f0, df0};
    const double cap = config.derivative_cap;
    auto record = [&](long double t, const OdeState<2>& st) {
        sol.xs.push_back((double)(xb + t));
        sol.f.push_back((double)st[0]);
        sol.df.push_back((double)st[1]);
        sol.last_valid_x = sol.xs.back();
        if (std::abs((double)st[1]) > cap) {
            sol.termination = Termination::DerivativeBlowup;
            return false;
        }
        return true;
    };
    if (config.method == OdeMethod::FixedRk4) {
        numeric::rk4_integrate<2>(rhs, y, 0.0L, (long double)span, (long double)config.step, record);
    } else {
        numeric::rkf45_integrate<2>(rhs, y, 0.0L, (long double)span, config.abs_tol,
                                    config.rel_tol, record);
    }
    return sol;
}

std::vector<double> graph_recompute_residuals(const GraphSolution& sol,
                                              const SelfSimParams& params) {
    std::vector<double> out(sol.xs.size(), 0.0);
    for (std::size_t i = 1; i + 1 < sol.xs.size(); ++i) {
        const double slope = central_slope(sol.xs[i - 1], sol.df[i - 1], sol.xs[i], sol.df[i],
                                           sol.xs[i + 1], sol.df[i + 1]);
        out[i] = slope - graph_second_derivative(sol.xs[i], sol.f[i], sol.df[i], params);
    }
    return out;
}

std::vector<double> circle_radii(const SelfSimParams& params) {
    if (params.alpha == 0.0) throw Error("circle_radii: alpha must be nonzero");
    // alpha r^2 - lambda r + 1 = 0
    const double disc = params.lambda * params.lambda - 4.0 * params.alpha;
    std::vector<double> out;
    if (disc < 0) return out;
    const double sq = std::sqrt(disc);
    // Stable quadratic roots: q = -(b + sign(b) sqrt(disc)) / 2 with b = -lambda.
    const double b = -params.lambda;
    const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
    double r1, r2;
    if (q != 0.0) {
        r1 = q / params.alpha;
        r2 = 1.0 / q;
    } else {
        r1 = 0.0;
        r2 = 0.0;
    }
    for (double r : {r1, r2})
        if (r > 1e-12) out.push_back(r);
    std::sort(out.begin(), out.end());
    if (out.size() == 2 && std::abs(out[0] - out[1]) <= 1e-12 * std::max(1.0, out[0]))
        out.pop_back();
    return out;
}

} // namespace selfsim::profile
