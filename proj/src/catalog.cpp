#include "selfsim/catalog.hpp"

#include <cmath>
#include <numbers>

namespace selfsim::catalog {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

double lambda_for(const CatalogSurface& surface, double alpha) {
    return std::visit(
        [alpha](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Plane>) return -alpha * s.d;
            if constexpr (std::is_same_v<T, Sphere>) return 2.0 / s.r + alpha * s.r;
            if constexpr (std::is_same_v<T, Cylinder>) return 1.0 / s.r + alpha * s.r;
        },
        surface);
}

SurfacePatch make_patch(const CatalogSurface& surface) {
    SurfacePatch patch;
    if (const auto* p = std::get_if<Plane>(&surface)) {
        const Vec3 n = p->normal.normalized();
        Vec3 e1, e2;
        orthonormal_complement(n, e1, e2); // e1 x e2 = n
        const Vec3 base = n * p->d;
        patch.domain = {-2.0, 2.0, -2.0, 2.0};
        patch.value = [=](double s, double t) { return base + e1 * s + e2 * t; };
        patch.jet = [=](double s, double t) {
            PatchJet j;
            j.X = base + e1 * s + e2 * t;
            j.Xs = e1;
            j.Xt = e2;
            return j;
        };
    } else if (const auto* sp = std::get_if<Sphere>(&surface)) {
        // azimuth first, polar second: X_s x X_t points inward, H = 2/r
        const double r = sp->r;
        patch.domain = {0.0, 2.0 * kPi, 0.15, kPi - 0.15};
        patch.value = [r](double u, double v) {
            return Vec3{r * std::sin(v) * std::cos(u), r * std::sin(v) * std::sin(u), r * std::cos(v)};
        };
        patch.jet = [r](double u, double v) {
            const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
            PatchJet j;
            j.X = {r * sv * cu, r * sv * su, r * cv};
            j.Xs = {-r * sv * su, r * sv * cu, 0};
            j.Xt = {r * cv * cu, r * cv * su, -r * sv};
            j.Xss = {-r * sv * cu, -r * sv * su, 0};
            j.Xst = {-r * cv * su, r * cv * cu, 0};
            j.Xtt = {-r * sv * cu, -r * sv * su, -r * cv};
            return j;
        };
    } else {
        const auto& c = std::get<Cylinder>(surface);
        const double r = c.r;
        const Vec3 a = c.axis.normalized();
        Vec3 p, q;
        orthonormal_complement(a, p, q);
        // axis coordinate first: X_s x X_t points inward, H = 1/r
        patch.domain = {-2.0, 2.0, 0.0, 2.0 * kPi};
        patch.value = [=](double u, double v) {
            return a * u + p * (r * std::cos(v)) + q * (r * std::sin(v));
        };
        patch.jet = [=](double u, double v) {
            const double cv = std::cos(v), sv = std::sin(v);
            PatchJet j;
            j.X = a * u + p * (r * cv) + q * (r * sv);
            j.Xs = a;
            j.Xt = p * (-r * sv) + q * (r * cv);
            j.Xtt = p * (-r * cv) + q * (-r * sv);
            return j;
        };
    }
    return patch;
}

ResidualReport verify_catalog(const CatalogSurface& surface, const SelfSimParams& params,
                              std::size_t ns, std::size_t nt, double tol,
                              FrameMode mode, double fd_step) {
    return verify_patch(make_patch(surface), params, ns, nt, tol, mode, fd_step);
}

} // namespace selfsim::catalog
