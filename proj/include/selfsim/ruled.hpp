#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "selfsim/geometry.hpp"
#include "selfsim/numeric.hpp"
#include "selfsim/profile_ode.hpp"
#include "selfsim/types.hpp"

namespace selfsim::ruled {

// ---------- directors: unit-speed curves on the unit sphere ----------

// Frame of the director at one parameter value: beta on the sphere, its first
// two derivatives, e3 = beta x beta', and the spherical geodesic curvature
// theta = (beta, beta', beta'').
struct DirectorFrame {
    Vec3 beta, dbeta, ddbeta, e3;
    double theta = 0;
};

class DirectorCurve {
public:
    virtual ~DirectorCurve() = default;
    virtual DirectorFrame at(double s) const = 0;
    virtual double s_min() const = 0;
    virtual double s_max() const = 0;
};

// beta(s) = cos(s) e1 + sin(s) e2; theta = 0.
std::shared_ptr<DirectorCurve> great_circle_director(const Vec3& e1, const Vec3& e2);

// Integrates beta'' = -beta + theta e3, e3' = -theta beta' with RK4 on a
// uniform grid; evaluation between nodes is Hermite. The initial frame must be
// orthonormal within 1e-10 or InvalidInitialFrame is thrown.
std::shared_ptr<DirectorCurve> synthesize_director(const std::function<double(double)>& theta,
                                                   const Vec3& beta0, const Vec3& dbeta0,
                                                   double s_begin, double s_end,
                                                   double step = 1e-3);

// Sampled director data (any parametrization): splined per component,
// reparametrized to arc length on the sphere, then gridded.
std::shared_ptr<DirectorCurve> director_from_table(const std::vector<double>& s,
                                                   const std::vector<double>& bx,
                                                   const std::vector<double>& by,
                                                   const std::vector<double>& bz,
                                                   double grid_step = 1e-3);

// ---------- space curves used as directrices ----------

struct CurveJet2 {
    Vec3 p, d1, d2;
};

class Curve3 {
public:
    virtual ~Curve3() = default;
    virtual CurveJet2 at(double s) const = 0;
};

std::shared_ptr<Curve3> line_curve(const Vec3& p0, const Vec3& v);
std::shared_ptr<Curve3> point_curve(const Vec3& p0);
std::shared_ptr<Curve3> helix_curve(double radius, double pitch); // (r cos s, r sin s, pitch s)
std::shared_ptr<Curve3> circle_curve(const Vec3& center, const Vec3& e1, const Vec3& e2,
                                     double r); // arc-length parametrized
std::shared_ptr<Curve3> functional_curve(std::function<CurveJet2(double)> f);
std::shared_ptr<Curve3> table_curve(const std::vector<double>& s, const std::vector<double>& x,
                                    const std::vector<double>& y, const std::vector<double>& z);

// gamma_tilde = gamma + u beta with u' = -<gamma', beta>, u(s_begin) = 0; the
// result traces the same ruled surface with <gamma_tilde', beta> = 0.
std::shared_ptr<Curve3> orthogonalize_directrix(const std::shared_ptr<Curve3>& gamma,
                                                const std::shared_ptr<DirectorCurve>& director,
                                                double s_begin, double s_end,
                                                double step = 1e-3);
std::shared_ptr<Curve3> orthogonalize_directrix_constant(const std::shared_ptr<Curve3>& gamma,
                                                         const Vec3& direction, double s_begin,
                                                         double s_end, double step = 1e-3);

// ---------- ruled surfaces ----------

enum class RuledKind { Generic, Conical, Cylindrical };

struct RuledSurface {
    RuledKind kind = RuledKind::Generic;
    std::shared_ptr<Curve3> directrix;          // orthogonalized (Generic/Cylindrical)
    std::shared_ptr<DirectorCurve> director;    // Generic/Conical
    Vec3 direction;                             // Cylindrical
    Vec3 apex;                                  // Conical
    double s_begin = 0, s_end = 1;
};

// Constructors orthogonalize the directrix against the rulings.
RuledSurface make_ruled(const std::shared_ptr<Curve3>& directrix,
                        const std::shared_ptr<DirectorCurve>& director, double s_begin,
                        double s_end, double step = 1e-3);
RuledSurface make_conical(const Vec3& apex, const std::shared_ptr<DirectorCurve>& director,
                          double s_begin, double s_end);
RuledSurface make_cylindrical(const std::shared_ptr<Curve3>& directrix, const Vec3& direction,
                              double s_begin, double s_end, double step = 1e-3);

DirectorFrame director_frame(const RuledSurface& surface, double s);
CurveJet2 directrix_jet(const RuledSurface& surface, double s);

// X(s, t) = gamma(s) + t beta(s), directrix parameter first.
SurfacePatch to_patch(const RuledSurface& surface, double t0, double t1);

// t-interval used when probing the residual polynomial at parameter s.
double probe_radius(const RuledSurface& surface, double s);

// ---------- residual polynomial coefficients ----------

// Coefficients (ascending in t) of L - alpha E ((gamma',beta,gamma) - t <e3,gamma>),
// the cubic whose vanishing is the defining equation with lambda = 0 along the
// ruling at s. Throws NonImmersed when E degenerates on the probe interval.
std::array<double, 4> ruled_coeffs_lambda0(const RuledSurface& surface, double alpha, double s);

// Coefficients of (L - alpha E (...))^2 - lambda^2 E^3, degree 6 in t.
std::array<double, 7> ruled_coeffs_squared(const RuledSurface& surface,
                                           const SelfSimParams& params, double s);

// Conical surface X = p0 + t beta: c2 = (beta',beta,beta''),
// c3 = -alpha (p0,beta',beta) - lambda.
std::pair<double, double> conical_coeffs(const Vec3& apex,
                                         const std::shared_ptr<DirectorCurve>& director,
                                         const SelfSimParams& params, double s);

// ---------- identity diagnostics ----------

struct Lambda0Identities {
    double u = 0, v = 0;         // gamma = u beta + v beta'
    double orth_residual = 0;    // u' - v  (= <gamma', beta>)
    double s1_residual = 0;      // (1 + alpha v^2) theta
    double s2_residual = 0;
    double s3_residual = 0;
};
Lambda0Identities identities_lambda0(const RuledSurface& surface, double alpha, double s,
                                     double in_plane_tol = 1e-8);

struct LambdaNonzeroIdentities {
    double lambda_residual = 0; // min-residual branch of lambda = ±alpha <e3, gamma>
    int branch_sign = +1;
    double theta_residual = 0;  // theta + alpha <e3,gamma><gamma',beta'> + alpha (gamma',beta,gamma)
    double gamma_residual = 0;  // |gamma'|^2 - <gamma',beta'>^2
};
LambdaNonzeroIdentities identities_lambda_nonzero(const RuledSurface& surface,
                                                  const SelfSimParams& params, double s);

// ---------- coefficient reports over an s-grid ----------

enum class CoeffForm { Lambda0, Squared };

struct CoeffRow {
    double s = 0;
    std::vector<double> c;
    double gamma = 0;                    // |gamma'|^2
    std::array<double, 3> L{0, 0, 0};    // the quadratic L, ascending in t
};

struct CoeffReport {
    CoeffForm form = CoeffForm::Lambda0;
    std::vector<CoeffRow> rows;
    std::vector<double> coeff_max_abs; // per coefficient index
    double max_abs = 0;
    double worst_s = 0;
};

CoeffReport build_coeff_report(const RuledSurface& surface, const SelfSimParams& params,
                               const std::vector<double>& s_samples, CoeffForm form);

// ---------- planar profiles and cylindrical patches ----------

struct PlanarJet {
    double x = 0, z = 0;
    double dx = 0, dz = 0;
    double ddx = 0, ddz = 0;
};

class PlanarCurve {
public:
    virtual ~PlanarCurve() = default;
    virtual PlanarJet at(double s) const = 0;
    virtual double s_min() const = 0;
    virtual double s_max() const = 0;
};

// Arc-length circle of radius r around the origin, counterclockwise from (r, 0).
std::shared_ptr<PlanarCurve> circle_profile(double r);
// Straight line from (x0, z0) with constant tangent angle.
std::shared_ptr<PlanarCurve> line_profile(double x0, double z0, double theta);
std::shared_ptr<PlanarCurve> functional_profile(std::function<PlanarJet(double)> f, double s_min,
                                                double s_max);

// Hermite interpolation of an integrated profile; curvature comes from the
// defining equation, so second derivatives are exact at the sample points.
std::shared_ptr<PlanarCurve> profile_curve(const selfsim::profile::ProfileSolution& sol,
                                           const SelfSimParams& params);

// Patch X(u, v) = u direction + (x(v), 0, z(v)), ruling parameter first; with
// direction (0,-1,0) its residual equals the profile-equation residual at v.
SurfacePatch cylindrical_patch(const std::shared_ptr<PlanarCurve>& profile, const Vec3& direction);

} // namespace selfsim::ruled
