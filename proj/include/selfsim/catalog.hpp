#pragma once

#include <variant>

#include "selfsim/geometry.hpp"
#include "selfsim/types.hpp"

namespace selfsim::catalog {

// Exact solutions of H = alpha <N, x> + lambda. Spheres are centered at the
// origin and cylinder axes pass through the origin; that is where the lambda
// relations below hold.
struct Plane {
    Vec3 normal{0, 0, 1}; // unit
    double d = 0;         // <normal, x> = d
};
struct Sphere {
    double r = 1; // > 0
};
struct Cylinder {
    double r = 1;        // > 0
    Vec3 axis{0, 0, 1};  // unit, through the origin
};

using CatalogSurface = std::variant<Plane, Sphere, Cylinder>;

// The unique lambda making the surface a solution for the given alpha,
// with the sphere/cylinder oriented inward and the plane along its normal.
double lambda_for(const CatalogSurface& surface, double alpha);

// Analytic patch with closed-form partials; orientation matches lambda_for.
SurfacePatch make_patch(const CatalogSurface& surface);

ResidualReport verify_catalog(const CatalogSurface& surface, const SelfSimParams& params,
                              std::size_t ns, std::size_t nt, double tol,
                              FrameMode mode = FrameMode::Closed,
                              double fd_step = kDefaultFdStep);

} // namespace selfsim::catalog
