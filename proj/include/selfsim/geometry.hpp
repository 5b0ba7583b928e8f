#pragma once

#include <functional>
#include <vector>

#include "selfsim/errors.hpp"
#include "selfsim/types.hpp"

namespace selfsim {

// First and second order surface data at a point. H is the trace of the
// second fundamental form: the unit sphere oriented inward has H = 2.
struct Frame {
    double E = 0, F = 0, G = 0; // first fundamental form
    double W = 0;               // EG - F^2
    Vec3 N;                     // unit normal (X_s x X_t)/sqrt(W)
    double H = 0;               // mean curvature, trace convention
};

// Second-order jet of a parametrized patch at (s, t).
struct PatchJet {
    Vec3 X;
    Vec3 Xs, Xt;
    Vec3 Xss, Xst, Xtt;
};

struct Domain {
    double s0 = 0, s1 = 1;
    double t0 = 0, t1 = 1;
    bool contains(double s, double t) const {
        return s >= s0 && s <= s1 && t >= t0 && t <= t1;
    }
};

// A parametrized surface patch. `value` must always be present; `jet` is the
// analytic second-order evaluator and may be empty (finite differences only).
struct SurfacePatch {
    std::function<Vec3(double, double)> value;
    std::function<PatchJet(double, double)> jet;
    Domain domain;

    bool has_jet() const { return static_cast<bool>(jet); }
};

inline constexpr double kDefaultWmin = 1e-14;
inline constexpr double kDefaultFdStep = 1e-4;

// Frame assembly from a second-order jet; throws NonImmersed when W <= w_min.
Frame frame_from_jet(const PatchJet& jet, double w_min = kDefaultWmin);

// Frame from the analytic partial evaluators of the patch.
Frame evaluate_frame_closed(const SurfacePatch& patch, double s, double t,
                            double w_min = kDefaultWmin);

// Frame from second-order central finite differences of the point evaluator.
// Requires the stencil of half-width 2h inside the patch domain.
Frame evaluate_frame_fd(const SurfacePatch& patch, double s, double t,
                        double h = kDefaultFdStep, double w_min = kDefaultWmin);

// Residual of H = alpha <N, x> + lambda at one point.
inline double selfsim_residual(const Frame& frame, const Vec3& point, const SelfSimParams& params) {
    return frame.H - params.alpha * dot(frame.N, point) - params.lambda;
}

// Weighted mean curvature H - alpha <N, x> for the density exp(alpha |x|^2 / 2).
inline double weighted_mean_curvature(const Frame& frame, const Vec3& point, double alpha) {
    return frame.H - alpha * dot(frame.N, point);
}

// Residual sweep over an inclusive ns x nt parameter grid.
struct ResidualReport {
    std::size_t ns = 0, nt = 0;
    std::vector<double> residuals; // row-major, ns rows of nt
    double max_abs = 0;
    double mean_abs = 0;
    double tol = 0;
    bool pass = false;
    double worst_s = 0, worst_t = 0; // witness of the max-abs sample
};

enum class FrameMode { Closed, FiniteDifference };

ResidualReport verify_patch(const SurfacePatch& patch, const SelfSimParams& params,
                            std::size_t ns, std::size_t nt, double tol,
                            FrameMode mode = FrameMode::Closed, double fd_step = kDefaultFdStep);

// The patch mapped through a linear isometry: value, jets and domain transform
// componentwise.
SurfacePatch transform_patch(const SurfacePatch& patch, const Mat3& map);

} // namespace selfsim
