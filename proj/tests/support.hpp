#pragma once

// Shared helpers for the test suites: deterministic RNG, random rotations,
// and the sampling-based coefficient oracle used against the closed forms.

#include <cmath>
#include <random>
#include <vector>

#include "selfsim/geometry.hpp"
#include "selfsim/numeric.hpp"
#include "selfsim/ruled.hpp"
#include "selfsim/types.hpp"

namespace testsup {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

inline selfsim::Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    selfsim::Vec3 v{g(rng), g(rng), g(rng)};
    while (v.norm() < 1e-6) v = {g(rng), g(rng), g(rng)};
    return v.normalized();
}

// Proper rotation from a uniformly random unit quaternion.
inline selfsim::Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    double w = g(rng), x = g(rng), y = g(rng), z = g(rng);
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n;
    x /= n;
    y /= n;
    z /= n;
    selfsim::Mat3 r;
    r.m[0][0] = 1 - 2 * (y * y + z * z);
    r.m[0][1] = 2 * (x * y - w * z);
    r.m[0][2] = 2 * (x * z + w * y);
    r.m[1][0] = 2 * (x * y + w * z);
    r.m[1][1] = 1 - 2 * (x * x + z * z);
    r.m[1][2] = 2 * (y * z - w * x);
    r.m[2][0] = 2 * (x * z - w * y);
    r.m[2][1] = 2 * (y * z + w * x);
    r.m[2][2] = 1 - 2 * (x * x + y * y);
    return r;
}

// Orientation flip of a frame: N -> -N negates H as well.
inline selfsim::Frame flipped(selfsim::Frame f) {
    f.N = -f.N;
    f.H = -f.H;
    return f;
}

// ---------- sampling oracle for ruled residual polynomials ----------
//
// Samples the defining-equation residual through the generic frame machinery
// (an independent code path from the closed-form coefficient expressions) and
// fits the polynomial with a Chebyshev-node Vandermonde least squares.

// lambda = 0 cubic: residual * E^{3/2} sampled at 7 nodes on [-R, R].
inline std::vector<double> oracle_coeffs_lambda0(const selfsim::ruled::RuledSurface& surf,
                                                 double alpha, double s) {
    using namespace selfsim;
    const double R = ruled::probe_radius(surf, s);
    const SurfacePatch patch = ruled::to_patch(surf, -R - 1.0, R + 1.0);
    const auto ts = numeric::cheb_nodes(7, -R, R);
    std::vector<double> qs;
    for (double t : ts) {
        const Frame f = evaluate_frame_closed(patch, s, t);
        const double r = selfsim_residual(f, patch.value(s, t), {alpha, 0.0});
        qs.push_back(r * f.W * std::sqrt(f.W));
    }
    return numeric::fit_poly(ts, qs, 3);
}

// squared degree-6 polynomial: E^3 r (r + 2 lambda) sampled at 9 nodes.
inline std::vector<double> oracle_coeffs_squared(const selfsim::ruled::RuledSurface& surf,
                                                 const selfsim::SelfSimParams& params, double s) {
    using namespace selfsim;
    const double R = ruled::probe_radius(surf, s);
    const SurfacePatch patch = ruled::to_patch(surf, -R - 1.0, R + 1.0);
    const auto ts = numeric::cheb_nodes(9, -R, R);
    std::vector<double> qs;
    for (double t : ts) {
        const Frame f = evaluate_frame_closed(patch, s, t);
        const double r = selfsim_residual(f, patch.value(s, t), params);
        qs.push_back(f.W * f.W * f.W * r * (r + 2.0 * params.lambda));
    }
    return numeric::fit_poly(ts, qs, 6);
}

// conical surfaces: nodes stay on t > 0 where E^{3/2} = t^3.
inline std::vector<double> oracle_coeffs_conical(const selfsim::ruled::RuledSurface& surf,
                                                 const selfsim::SelfSimParams& params, double s) {
    using namespace selfsim;
    const double R = ruled::probe_radius(surf, s);
    const SurfacePatch patch = ruled::to_patch(surf, 0.05, R + 1.0);
    const auto ts = numeric::cheb_nodes(7, 0.2, R);
    std::vector<double> qs;
    for (double t : ts) {
        const Frame f = evaluate_frame_closed(patch, s, t);
        const double r = selfsim_residual(f, patch.value(s, t), params);
        qs.push_back(r * f.W * std::sqrt(f.W));
    }
    return numeric::fit_poly(ts, qs, 3);
}

} // namespace testsup
