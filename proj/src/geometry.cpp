#include "selfsim/geometry.hpp"

#include <cmath>
#include <mutex>

#include "selfsim/numeric.hpp"

namespace selfsim {

Frame frame_from_jet(const PatchJet& jet, double w_min) {
    Frame f;
    f.E = dot(jet.Xs, jet.Xs);
    f.F = dot(jet.Xs, jet.Xt);
    f.G = dot(jet.Xt, jet.Xt);
    f.W = f.E * f.G - f.F * f.F;
    if (!(f.W > w_min)) throw NonImmersed("frame_from_jet: W below threshold");
    f.N = cross(jet.Xs, jet.Xt) / std::sqrt(f.W);
    const double e = dot(f.N, jet.Xss);
    const double m = dot(f.N, jet.Xst);
    const double g = dot(f.N, jet.Xtt);
    f.H = (e * f.G - 2.0 * m * f.F + g * f.E) / f.W;
    return f;
}

Frame evaluate_frame_closed(const SurfacePatch& patch, double s, double t, double w_min) {
    if (!patch.has_jet()) throw Error("evaluate_frame_closed: patch has no analytic partials");
    if (!patch.domain.contains(s, t)) throw Error("evaluate_frame_closed: (s,t) outside domain");
    return frame_from_jet(patch.jet(s, t), w_min);
}

Frame evaluate_frame_fd(const SurfacePatch& patch, double s, double t, double h, double w_min) {
    if (!(h > 0)) throw Error("evaluate_frame_fd: h must be positive");
    if (!patch.domain.contains(s - 2 * h, t - 2 * h) || !patch.domain.contains(s + 2 * h, t + 2 * h))
        throw StencilOutOfDomain("evaluate_frame_fd: stencil of half-width 2h leaves the domain");
    const auto& F = patch.value;
    PatchJet jet;
    jet.X = F(s, t);
    jet.Xs = (F(s + h, t) - F(s - h, t)) / (2 * h);
    jet.Xt = (F(s, t + h) - F(s, t - h)) / (2 * h);
    jet.Xss = (F(s + h, t) - jet.X * 2.0 + F(s - h, t)) / (h * h);
    jet.Xtt = (F(s, t + h) - jet.X * 2.0 + F(s, t - h)) / (h * h);
    jet.Xst = (F(s + h, t + h) - F(s + h, t - h) - F(s - h, t + h) + F(s - h, t - h)) / (4 * h * h);
    return frame_from_jet(jet, w_min);
}

ResidualReport verify_patch(const SurfacePatch& patch, const SelfSimParams& params,
                            std::size_t ns, std::size_t nt, double tol,
                            FrameMode mode, double fd_step) {
    if (ns < 2 || nt < 2) throw Error("verify_patch: grid must be at least 2x2");
    ResidualReport rep;
    rep.ns = ns;
    rep.nt = nt;
    rep.tol = tol;
    rep.residuals.assign(ns * nt, 0.0);

    const Domain& d = patch.domain;
    // Finite-difference frames need a 2h margin inside the domain.
    const double margin = mode == FrameMode::FiniteDifference ? 2.0 * fd_step : 0.0;
    const double s0 = d.s0 + margin, s1 = d.s1 - margin;
    const double t0 = d.t0 + margin, t1 = d.t1 - margin;
    if (!(s1 > s0) || !(t1 > t0)) throw Error("verify_patch: domain too small for the stencil");

    std::exception_ptr failure;
    std::mutex failure_mutex;
    numeric::parallel_for(ns * nt, [&](std::size_t idx) {
        const std::size_t i = idx / nt, j = idx % nt;
        const double s = s0 + (s1 - s0) * double(i) / double(ns - 1);
        const double t = t0 + (t1 - t0) * double(j) / double(nt - 1);
        try {
            const Frame f = mode == FrameMode::Closed ? evaluate_frame_closed(patch, s, t)
                                                      : evaluate_frame_fd(patch, s, t, fd_step);
            rep.residuals[idx] = selfsim_residual(f, patch.value(s, t), params);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    double sum = 0.0;
    bool first = true;
    for (std::size_t idx = 0; idx < rep.residuals.size(); ++idx) {
        const double a = std::abs(rep.residuals[idx]);
        sum += a;
        if (first || a > rep.max_abs) {
            first = false;
            rep.max_abs = a;
            const std::size_t i = idx / nt, j = idx % nt;
            rep.worst_s = s0 + (s1 - s0) * double(i) / double(ns - 1);
            rep.worst_t = t0 + (t1 - t0) * double(j) / double(nt - 1);
        }
    }
    rep.mean_abs = sum / double(rep.residuals.size());
    rep.pass = rep.max_abs <= tol;
    return rep;
}

SurfacePatch transform_patch(const SurfacePatch& patch, const Mat3& map) {
    SurfacePatch out;
    out.domain = patch.domain;
    const auto value = patch.value;
    out.value = [value, map](double s, double t) { return map.apply(value(s, t)); };
    if (patch.has_jet()) {
        const auto jet = patch.jet;
        out.jet = [jet, map](double s, double t) {
            PatchJet j = jet(s, t);
            j.X = map.apply(j.X);
            j.Xs = map.apply(j.Xs);
            j.Xt = map.apply(j.Xt);
            j.Xss = map.apply(j.Xss);
            j.Xst = map.apply(j.Xst);
            j.Xtt = map.apply(j.Xtt);
            return j;
        };
    }
    return out;
}

} // namespace selfsim
