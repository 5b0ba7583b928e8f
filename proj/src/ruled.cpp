#include "selfsim/ruled.hpp"

#include <algorithm>
#include <cmath>

#include "selfsim/errors.hpp"

namespace selfsim::ruled {

using numeric::OdeState;

// ---------- Hermite helpers ----------

namespace {

// Cubic Hermite value and derivative on [0, h] from endpoint values/slopes.
struct Hermite3 {
    double value, d1;
};
Hermite3 hermite3(double p0, double m0, double p1, double m1, double h, double x) {
    const double u = x / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    const double d00 = (6 * u2 - 6 * u) / h, d10 = (3 * u2 - 4 * u + 1) / h;
    const double d01 = (-6 * u2 + 6 * u) / h, d11 = (3 * u2 - 2 * u) / h;
    return {h00 * p0 + h * h10 * m0 + h01 * p1 + h * h11 * m1,
            d00 * p0 + h * d10 * m0 + d01 * p1 + h * d11 * m1};
}

Vec3 hermite3_vec(const Vec3& p0, const Vec3& m0, const Vec3& p1, const Vec3& m1, double h,
                  double x) {
    return {hermite3(p0.x, m0.x, p1.x, m1.x, h, x).value,
            hermite3(p0.y, m0.y, p1.y, m1.y, h, x).value,
            hermite3(p0.z, m0.z, p1.z, m1.z, h, x).value};
}

// Quintic Hermite from values, first and second derivatives at both ends.
struct Hermite5 {
    double value, d1, d2;
};
Hermite5 hermite5(double p0, double m0, double c0, double p1, double m1, double c1, double h,
                  double x) {
    const double u = x / h;
    // Basis alpha_i(u) with prescribed (value, d1, d2) at u = 0 and u = 1.
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const double a0 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
    const double a1 = u - 6 * u3 + 8 * u4 - 3 * u5;
    const double a2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
    const double a3 = 10 * u3 - 15 * u4 + 6 * u5;
    const double a4 = -4 * u3 + 7 * u4 - 3 * u5;
    const double a5 = 0.5 * u3 - u4 + 0.5 * u5;
    const double da0 = (-30 * u2 + 60 * u3 - 30 * u4) / h;
    const double da1 = (1 - 18 * u2 + 32 * u3 - 15 * u4) / h;
    const double da2 = (u - 4.5 * u2 + 6 * u3 - 2.5 * u4) / h;
    const double da3 = (30 * u2 - 60 * u3 + 30 * u4) / h;
    const double da4 = (-12 * u2 + 28 * u3 - 15 * u4) / h;
    const double da5 = (1.5 * u2 - 4 * u3 + 2.5 * u4) / h;
    const double dda0 = (-60 * u + 180 * u2 - 120 * u3) / (h * h);
    const double dda1 = (-36 * u + 96 * u2 - 60 * u3) / (h * h);
    const double dda2 = (1 - 9 * u + 18 * u2 - 10 * u3) / (h * h);
    const double dda3 = (60 * u - 180 * u2 + 120 * u3) / (h * h);
    const double dda4 = (-24 * u + 84 * u2 - 60 * u3) / (h * h);
    const double dda5 = (3 * u - 12 * u2 + 10 * u3) / (h * h);
    const double hm0 = h * m0, hm1 = h * m1;
    const double hc0 = h * h * c0, hc1 = h * h * c1;
    return {a0 * p0 + a1 * hm0 + a2 * hc0 + a3 * p1 + a4 * hm1 + a5 * hc1,
            da0 * p0 + da1 * hm0 + da2 * hc0 + da3 * p1 + da4 * hm1 + da5 * hc1,
            dda0 * p0 + dda1 * hm0 + dda2 * hc0 + dda3 * p1 + dda4 * hm1 + dda5 * hc1};
}

} // namespace

// ---------- directors ----------

namespace {

class GreatCircleDirector final : public DirectorCurve {
public:
    GreatCircleDirector(const Vec3& e1, const Vec3& e2) {
        e1_ = e1.normalized();
        e2_ = (e2 - e1_ * dot(e2, e1_)).normalized();
        e3_ = cross(e1_, e2_);
    }
    DirectorFrame at(double s) const override {
        const double c = std::cos(s), sn = std::sin(s);
        DirectorFrame f;
        f.beta = e1_ * c + e2_ * sn;
        f.dbeta = e1_ * (-sn) + e2_ * c;
        f.ddbeta = -f.beta;
        f.e3 = e3_;
        f.theta = 0.0;
        return f;
    }
    double s_min() const override { return -1e9; }
    double s_max() const override { return 1e9; }

private:
    Vec3 e1_, e2_, e3_;
};

// Uniform grid of frames with Hermite evaluation between nodes.
class GridDirector final : public DirectorCurve {
public:
    GridDirector(double s0, double h, std::vector<Vec3> beta, std::vector<Vec3> dbeta,
                 std::vector<Vec3> e3, std::vector<double> theta,
                 std::function<double(double)> theta_fn)
        : s0_(s0), h_(h), beta_(std::move(beta)), dbeta_(std::move(dbeta)), e3_(std::move(e3)),
          theta_(std::move(theta)), theta_fn_(std::move(theta_fn)) {}

    DirectorFrame at(double s) const override {
        const std::size_t n = beta_.size();
        double u = (s - s0_) / h_;
        if (u < 0) u = 0;
        if (u > double(n - 1)) u = double(n - 1);
        std::size_t i = (std::size_t)u;
        if (i >= n - 1) i = n - 2;
        const double x = s - (s0_ + h_ * double(i));

        DirectorFrame f;
        const Vec3 dd0 = -beta_[i] + e3_[i] * theta_[i];
        const Vec3 dd1 = -beta_[i + 1] + e3_[i + 1] * theta_[i + 1];
        f.beta = hermite3_vec(beta_[i], dbeta_[i], beta_[i + 1], dbeta_[i + 1], h_, x);
        f.dbeta = hermite3_vec(dbeta_[i], dd0, dbeta_[i + 1], dd1, h_, x);
        f.e3 = hermite3_vec(e3_[i], dbeta_[i] * -theta_[i], e3_[i + 1], dbeta_[i + 1] * -theta_[i + 1],
                            h_, x);
        f.theta = theta_fn_ ? theta_fn_(s)
                            : theta_[i] + (theta_[i + 1] - theta_[i]) * (x / h_);
        f.ddbeta = -f.beta + f.e3 * f.theta;
        return f;
    }
    double s_min() const override { return s0_; }
    double s_max() const override { return s0_ + h_ * double(beta_.size() - 1); }

private:
    double s0_, h_;
    std::vector<Vec3> beta_, dbeta_, e3_;
    std::vector<double> theta_;
    std::function<double(double)> theta_fn_;
};

} // namespace

std::shared_ptr<DirectorCurve> great_circle_director(const Vec3& e1, const Vec3& e2) {
    return std::make_shared<GreatCircleDirector>(e1, e2);
}

std::shared_ptr<DirectorCurve> synthesize_director(const std::function<double(double)>& theta,
                                                   const Vec3& beta0, const Vec3& dbeta0,
                                                   double s_begin, double s_end, double step) {
    if (std::abs(beta0.norm() - 1.0) > 1e-10 || std::abs(dbeta0.norm() - 1.0) > 1e-10 ||
        std::abs(dot(beta0, dbeta0)) > 1e-10)
        throw InvalidInitialFrame("synthesize_director: initial frame not orthonormal");
    if (!(s_end > s_begin) || !(step > 0)) throw Error("synthesize_director: bad range or step");

    const std::size_t n = (std::size_t)std::ceil((s_end - s_begin) / step);
    const double h = (s_end - s_begin) / double(n);

    std::vector<Vec3> beta, dbeta, e3;
    std::vector<double> th;
    beta.reserve(n + 1);
    dbeta.reserve(n + 1);
    e3.reserve(n + 1);
    th.reserve(n + 1);

    const Vec3 e30 = cross(beta0, dbeta0);
    OdeState<9> y{beta0.x, beta0.y, beta0.z, dbeta0.x, dbeta0.y, dbeta0.z, e30.x, e30.y, e30.z};
    auto rhs = [&theta, s_begin](long double s, const OdeState<9>& v) {
        const double Th = theta(s_begin + (double)s);
        OdeState<9> d;
        // beta' = dbeta
        d[0] = v[3];
        d[1] = v[4];
        d[2] = v[5];
        // dbeta' = -beta + Th e3
        d[3] = -v[0] + Th * v[6];
        d[4] = -v[1] + Th * v[7];
        d[5] = -v[2] + Th * v[8];
        // e3' = -Th dbeta
        d[6] = -Th * v[3];
        d[7] = -Th * v[4];
        d[8] = -Th * v[5];
        return d;
    };
    auto record = [&](long double s, const OdeState<9>& v) {
        beta.push_back({(double)v[0], (double)v[1], (double)v[2]});
        dbeta.push_back({(double)v[3], (double)v[4], (double)v[5]});
        e3.push_back({(double)v[6], (double)v[7], (double)v[8]});
        th.push_back(theta(s_begin + (double)s));
        return true;
    };
    numeric::rk4_integrate<9>(rhs, y, 0.0L, (long double)(s_end - s_begin), (long double)h, record);

    return std::make_shared<GridDirector>(s_begin, h, std::move(beta), std::move(dbeta),
                                          std::move(e3), std::move(th), theta);
}

std::shared_ptr<DirectorCurve> director_from_table(const std::vector<double>& s,
                                                   const std::vector<double>& bx,
                                                   const std::vector<double>& by,
                                                   const std::vector<double>& bz,
                                                   double grid_step) {
    if (s.size() < 2 || bx.size() != s.size() || by.size() != s.size() || bz.size() != s.size())
        throw Error("director_from_table: inconsistent table sizes");
    const auto sx = numeric::QuinticSpline::fit(s, bx);
    const auto sy = numeric::QuinticSpline::fit(s, by);
    const auto sz = numeric::QuinticSpline::fit(s, bz);

    auto raw = [&](double sig) {
        return Vec3{sx.eval(sig), sy.eval(sig), sz.eval(sig)};
    };
    auto raw_d = [&](double sig, int der) {
        return Vec3{sx.eval(sig, der), sy.eval(sig, der), sz.eval(sig, der)};
    };

    // Cumulative arc length of the splined curve on a fine parameter grid.
    const std::size_t nfine = std::max<std::size_t>(64, s.size() * 8);
    std::vector<double> sig(nfine + 1), arc(nfine + 1);
    const double dsig = (s.back() - s.front()) / double(nfine);
    arc[0] = 0;
    sig[0] = s.front();
    for (std::size_t i = 1; i <= nfine; ++i) {
        sig[i] = s.front() + dsig * double(i);
        // Simpson on each subinterval
        const double a = sig[i - 1], b = sig[i], m = 0.5 * (a + b);
        const double fa = raw_d(a, 1).norm(), fm = raw_d(m, 1).norm(), fb = raw_d(b, 1).norm();
        arc[i] = arc[i - 1] + (b - a) / 6.0 * (fa + 4 * fm + fb);
    }
    const double total = arc.back();
    if (!(total > 0)) throw Error("director_from_table: degenerate curve");

    // Invert arc(sigma) with monotone cubic interpolation, then grid frames.
    const std::size_t n = std::max<std::size_t>(2, (std::size_t)std::ceil(total / grid_step)) + 1;
    const double h = total / double(n - 1);
    std::vector<Vec3> beta, dbeta, e3;
    std::vector<double> th;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = h * double(i);
        while (k + 1 < arc.size() && arc[k + 1] < target) ++k;
        double sg;
        if (k + 1 >= arc.size())
            sg = sig.back();
        else {
            // Hermite inversion on [arc_k, arc_{k+1}] with dsigma/darc = 1/|dbeta|
            const double m0 = 1.0 / std::max(raw_d(sig[k], 1).norm(), 1e-30);
            const double m1 = 1.0 / std::max(raw_d(sig[k + 1], 1).norm(), 1e-30);
            sg = hermite3(sig[k], m0, sig[k + 1], m1, arc[k + 1] - arc[k], target - arc[k]).value;
        }
        const Vec3 b_raw = raw(sg);
        const Vec3 d1 = raw_d(sg, 1);
        const Vec3 d2 = raw_d(sg, 2);
        const double speed = std::max(d1.norm(), 1e-30);
        const Vec3 b = b_raw.normalized();
        Vec3 tang = d1 / speed;
        tang = (tang - b * dot(tang, b)).normalized();
        // chain rule: beta'' in arc length, then theta from the triple product
        const double dspeed = dot(d1, d2) / speed;
        const Vec3 dd = (d2 - d1 * (dspeed / speed)) / (speed * speed);
        beta.push_back(b);
        dbeta.push_back(tang);
        e3.push_back(cross(b, tang));
        th.push_back(triple(b, tang, dd));
    }
    return std::make_shared<GridDirector>(0.0, h, std::move(beta), std::move(dbeta), std::move(e3),
                                          std::move(th), nullptr);
}

// ---------- curves ----------

namespace {

class FunctionalCurve final : public Curve3 {
public:
    explicit FunctionalCurve(std::function<CurveJet2(double)> f) : f_(std::move(f)) {}
    CurveJet2 at(double s) const override { return f_(s); }

private:
    std::function<CurveJet2(double)> f_;
};

// gamma + u beta; u is gridded, u' and u'' are evaluated exactly.
class OrthogonalizedCurve final : public Curve3 {
public:
    OrthogonalizedCurve(std::shared_ptr<Curve3> base,
                        std::function<DirectorFrame(double)> beta, double s0, double h,
                        std::vector<double> u)
        : base_(std::move(base)), beta_(std::move(beta)), s0_(s0), h_(h), u_(std::move(u)) {}

    CurveJet2 at(double s) const override {
        const CurveJet2 g = base_->at(s);
        const DirectorFrame f = beta_(s);
        const double u = u_at(s, g, f);
        const double du = -dot(g.d1, f.beta);
        const double ddu = -dot(g.d2, f.beta) - dot(g.d1, f.dbeta);
        CurveJet2 out;
        out.p = g.p + f.beta * u;
        out.d1 = g.d1 + f.beta * du + f.dbeta * u;
        out.d2 = g.d2 + f.beta * ddu + f.dbeta * (2 * du) + f.ddbeta * u;
        return out;
    }

private:
    double u_at(double s, const CurveJet2&, const DirectorFrame&) const {
        const std::size_t n = u_.size();
        double w = (s - s0_) / h_;
        if (w < 0) w = 0;
        if (w > double(n - 1)) w = double(n - 1);
        std::size_t i = (std::size_t)w;
        if (i >= n - 1) i = n - 2;
        const double x = s - (s0_ + h_ * double(i));
        const double m0 = du_at(s0_ + h_ * double(i));
        const double m1 = du_at(s0_ + h_ * double(i + 1));
        return hermite3(u_[i], m0, u_[i + 1], m1, h_, x).value;
    }
    double du_at(double s) const { return -dot(base_->at(s).d1, beta_(s).beta); }

    std::shared_ptr<Curve3> base_;
    std::function<DirectorFrame(double)> beta_;
    double s0_, h_;
    std::vector<double> u_;
};

std::shared_ptr<Curve3> orthogonalize_impl(const std::shared_ptr<Curve3>& gamma,
                                           std::function<DirectorFrame(double)> beta,
                                           double s_begin, double s_end, double step) {
    if (!(s_end > s_begin) || !(step > 0)) throw Error("orthogonalize_directrix: bad range");
    const std::size_t n = (std::size_t)std::ceil((s_end - s_begin) / step);
    const double h = (s_end - s_begin) / double(n);
    std::vector<double> u;
    u.reserve(n + 1);
    OdeState<1> y{0.0L};
    auto rhs = [&](long double s, const OdeState<1>&) {
        const double ss = s_begin + (double)s;
        return OdeState<1>{-dot(gamma->at(ss).d1, beta(ss).beta)};
    };
    auto record = [&](long double, const OdeState<1>& v) {
        u.push_back((double)v[0]);
        return true;
    };
    numeric::rk4_integrate<1>(rhs, y, 0.0L, (long double)(s_end - s_begin), (long double)h, record);
    return std::make_shared<OrthogonalizedCurve>(gamma, std::move(beta), s_begin, h, std::move(u));
}

} // namespace

std::shared_ptr<Curve3> line_curve(const Vec3& p0, const Vec3& v) {
    return std::make_shared<FunctionalCurve>([p0, v](double s) {
        return CurveJet2{p0 + v * s, v, Vec3{}};
    });
}

std::shared_ptr<Curve3> point_curve(const Vec3& p0) {
    return std::make_shared<FunctionalCurve>([p0](double) {
        return CurveJet2{p0, Vec3{}, Vec3{}};
    });
}

std::shared_ptr<Curve3> helix_curve(double radius, double pitch) {
    return std::make_shared<FunctionalCurve>([radius, pitch](double s) {
        const double c = std::cos(s), sn = std::sin(s);
        return CurveJet2{{radius * c, radius * sn, pitch * s},
                         {-radius * sn, radius * c, pitch},
                         {-radius * c, -radius * sn, 0.0}};
    });
}

std::shared_ptr<Curve3> circle_curve(const Vec3& center, const Vec3& e1_in, const Vec3& e2_in,
                                     double r) {
    const Vec3 e1 = e1_in.normalized();
    const Vec3 e2 = (e2_in - e1 * dot(e2_in, e1)).normalized();
    return std::make_shared<FunctionalCurve>([center, e1, e2, r](double s) {
        const double c = std::cos(s / r), sn = std::sin(s / r);
        return CurveJet2{center + e1 * (r * c) + e2 * (r * sn),
                         e1 * (-sn) + e2 * c,
                         e1 * (-c / r) + e2 * (-sn / r)};
    });
}

std::shared_ptr<Curve3> functional_curve(std::function<CurveJet2(double)> f) {
    return std::make_shared<FunctionalCurve>(std::move(f));
}

std::shared_ptr<Curve3> table_curve(const std::vector<double>& s, const std::vector<double>& x,
                                    const std::vector<double>& y, const std::vector<double>& z) {
    const auto sx = numeric::QuinticSpline::fit(s, x);
    const auto sy = numeric::QuinticSpline::fit(s, y);
    const auto sz = numeric::QuinticSpline::fit(s, z);
    return std::make_shared<FunctionalCurve>([sx, sy, sz](double ss) {
        return CurveJet2{{sx.eval(ss), sy.eval(ss), sz.eval(ss)},
                         {sx.eval(ss, 1), sy.eval(ss, 1), sz.eval(ss, 1)},
                         {sx.eval(ss, 2), sy.eval(ss, 2), sz.eval(ss, 2)}};
    });
}

std::shared_ptr<Curve3> orthogonalize_directrix(const std::shared_ptr<Curve3>& gamma,
                                                const std::shared_ptr<DirectorCurve>& director,
                                                double s_begin, double s_end, double step) {
    auto beta = [director](double s) { return director->at(s); };
    return orthogonalize_impl(gamma, beta, s_begin, s_end, step);
}

std::shared_ptr<Curve3> orthogonalize_directrix_constant(const std::shared_ptr<Curve3>& gamma,
                                                         const Vec3& direction, double s_begin,
                                                         double s_end, double step) {
    const Vec3 d = direction.normalized();
    auto beta = [d](double) {
        DirectorFrame f;
        f.beta = d;
        return f;
    };
    return orthogonalize_impl(gamma, beta, s_begin, s_end, step);
}

// ---------- ruled surfaces ----------

RuledSurface make_ruled(const std::shared_ptr<Curve3>& directrix,
                        const std::shared_ptr<DirectorCurve>& director, double s_begin,
                        double s_end, double step) {
    RuledSurface r;
    r.kind = RuledKind::Generic;
    r.director = director;
    r.directrix = orthogonalize_directrix(directrix, director, s_begin, s_end, step);
    r.s_begin = s_begin;
    r.s_end = s_end;
    return r;
}

RuledSurface make_conical(const Vec3& apex, const std::shared_ptr<DirectorCurve>& director,
                          double s_begin, double s_end) {
    RuledSurface r;
    r.kind = RuledKind::Conical;
    r.apex = apex;
    r.director = director;
    r.directrix = point_curve(apex);
    r.s_begin = s_begin;
    r.s_end = s_end;
    return r;
}

RuledSurface make_cylindrical(const std::shared_ptr<Curve3>& directrix, const Vec3& direction,
                              double s_begin, double s_end, double step) {
    RuledSurface r;
    r.kind = RuledKind::Cylindrical;
    r.direction = direction.normalized();
    r.directrix = orthogonalize_directrix_constant(directrix, r.direction, s_begin, s_end, step);
    r.s_begin = s_begin;
    r.s_end = s_end;
    return r;
}

DirectorFrame director_frame(const RuledSurface& surface, double s) {
    if (surface.kind == RuledKind::Cylindrical) {
        DirectorFrame f;
        f.beta = surface.direction;
        return f;
    }
    return surface.director->at(s);
}

CurveJet2 directrix_jet(const RuledSurface& surface, double s) { return surface.directrix->at(s); }

SurfacePatch to_patch(const RuledSurface& surface, double t0, double t1) {
    SurfacePatch patch;
    patch.domain = {surface.s_begin, surface.s_end, t0, t1};
    const RuledSurface surf = surface;
    patch.value = [surf](double s, double t) {
        return directrix_jet(surf, s).p + director_frame(surf, s).beta * t;
    };
    patch.jet = [surf](double s, double t) {
        const CurveJet2 g = directrix_jet(surf, s);
        const DirectorFrame f = director_frame(surf, s);
        PatchJet j;
        j.X = g.p + f.beta * t;
        j.Xs = g.d1 + f.dbeta * t;
        j.Xt = f.beta;
        j.Xss = g.d2 + f.ddbeta * t;
        j.Xst = f.dbeta;
        j.Xtt = Vec3{};
        return j;
    };
    return patch;
}

double probe_radius(const RuledSurface& surface, double s) {
    return std::max(1.0, directrix_jet(surface, s).p.norm());
}

std::array<double, 4> ruled_coeffs_lambda0(const RuledSurface& surface, double alpha, double s) {
    const CurveJet2 g = directrix_jet(surface, s);
    if (surface.kind == RuledKind::Cylindrical) {
        const Vec3 b = surface.direction;
        const double gamma2 = dot(g.d1, g.d1);
        // E is identically Gamma here: a singular directrix degenerates the
        // whole probe interval. With a unit-speed director E = Gamma + 2Jt + t^2
        // is nonnegative with at most an isolated zero, which is harmless for
        // the polynomial coefficients.
        if (!(gamma2 > kDefaultWmin))
            throw NonImmersed("ruled coefficients: directrix is singular");
        const double c0 = triple(g.d1, b, g.d2) - alpha * gamma2 * triple(g.d1, b, g.p);
        return {c0, 0.0, 0.0, 0.0};
    }
    const DirectorFrame f = director_frame(surface, s);
    const double A = triple(g.d1, f.beta, g.p);
    const double B = dot(f.e3, g.p);
    const double J = dot(g.d1, f.dbeta);
    const double gamma2 = dot(g.d1, g.d1);
    const double c0 = triple(g.d1, f.beta, g.d2) - alpha * A * gamma2;
    const double c1 = -(dot(f.e3, g.d2) + f.theta * J) - alpha * (2 * A * J - B * gamma2);
    const double c2 = -f.theta - alpha * (A - 2 * B * J);
    const double c3 = alpha * B;
    return {c0, c1, c2, c3};
}

std::array<double, 7> ruled_coeffs_squared(const RuledSurface& surface,
                                           const SelfSimParams& params, double s) {
    const auto p4 = ruled_coeffs_lambda0(surface, params.alpha, s);
    const std::vector<double> P(p4.begin(), p4.end());
    std::vector<double> E;
    if (surface.kind == RuledKind::Cylindrical) {
        const CurveJet2 g = directrix_jet(surface, s);
        E = {dot(g.d1, g.d1)};
    } else {
        const CurveJet2 g = directrix_jet(surface, s);
        const DirectorFrame f = director_frame(surface, s);
        E = {dot(g.d1, g.d1), 2.0 * dot(g.d1, f.dbeta), 1.0};
    }
    const std::vector<double> p2 = numeric::poly_mul(P, P);
    const std::vector<double> e3p = numeric::poly_mul(numeric::poly_mul(E, E), E);
    std::array<double, 7> q{};
    for (std::size_t i = 0; i < p2.size() && i < 7; ++i) q[i] += p2[i];
    const double l2 = params.lambda * params.lambda;
    for (std::size_t i = 0; i < e3p.size() && i < 7; ++i) q[i] -= l2 * e3p[i];
    return q;
}

std::pair<double, double> conical_coeffs(const Vec3& apex,
                                         const std::shared_ptr<DirectorCurve>& director,
                                         const SelfSimParams& params, double s) {
    const DirectorFrame f = director->at(s);
    const double c2 = triple(f.dbeta, f.beta, f.ddbeta);
    const double c3 = -params.alpha * triple(apex, f.dbeta, f.beta) - params.lambda;
    return {c2, c3};
}

Lambda0Identities identities_lambda0(const RuledSurface& surface, double alpha, double s,
                                     double in_plane_tol) {
    if (surface.kind == RuledKind::Cylindrical)
        throw Error("identities_lambda0: needs a non-constant director");
    const CurveJet2 g = directrix_jet(surface, s);
    const DirectorFrame f = director_frame(surface, s);
    const double B = dot(f.e3, g.p);
    if (std::abs(B) > in_plane_tol)
        throw NotInPlane("identities_lambda0: <e3, gamma> is not zero at this sample");
    Lambda0Identities out;
    out.u = dot(g.p, f.beta);
    out.v = dot(g.p, f.dbeta);
    out.orth_residual = dot(g.d1, f.beta);
    const double J = dot(g.d1, f.dbeta);
    const double gamma2 = dot(g.d1, g.d1);
    out.s1_residual = (1.0 + alpha * out.v * out.v) * f.theta;
    out.s2_residual = dot(f.e3, g.d2) + f.theta * J + 2.0 * alpha * out.v * out.v * J * f.theta;
    out.s3_residual = triple(g.d1, f.beta, g.d2) - alpha * out.v * out.v * gamma2 * f.theta;
    return out;
}

LambdaNonzeroIdentities identities_lambda_nonzero(const RuledSurface& surface,
                                                  const SelfSimParams& params, double s) {
    if (params.lambda == 0.0) throw Error("identities_lambda_nonzero: lambda must be nonzero");
    if (surface.kind == RuledKind::Cylindrical)
        throw Error("identities_lambda_nonzero: needs a non-constant director");
    const CurveJet2 g = directrix_jet(surface, s);
    const DirectorFrame f = director_frame(surface, s);
    const double B = dot(f.e3, g.p);
    const double A = triple(g.d1, f.beta, g.p);
    const double J = dot(g.d1, f.dbeta);
    const double gamma2 = dot(g.d1, g.d1);
    LambdaNonzeroIdentities out;
    const double rp = params.lambda - params.alpha * B;
    const double rm = params.lambda + params.alpha * B;
    if (std::abs(rp) <= std::abs(rm)) {
        out.lambda_residual = rp;
        out.branch_sign = +1;
    } else {
        out.lambda_residual = rm;
        out.branch_sign = -1;
    }
    out.theta_residual = f.theta + params.alpha * B * J + params.alpha * A;
    out.gamma_residual = gamma2 - J * J;
    return out;
}

CoeffReport build_coeff_report(const RuledSurface& surface, const SelfSimParams& params,
                               const std::vector<double>& s_samples, CoeffForm form) {
    CoeffReport rep;
    rep.form = form;
    rep.rows.resize(s_samples.size());
    numeric::parallel_for(s_samples.size(), [&](std::size_t i) {
        const double s = s_samples[i];
        CoeffRow row;
        row.s = s;
        if (form == CoeffForm::Lambda0) {
            const auto c = ruled_coeffs_lambda0(surface, params.alpha, s);
            row.c.assign(c.begin(), c.end());
        } else {
            const auto c = ruled_coeffs_squared(surface, params, s);
            row.c.assign(c.begin(), c.end());
        }
        const CurveJet2 g = directrix_jet(surface, s);
        row.gamma = dot(g.d1, g.d1);
        if (surface.kind != RuledKind::Cylindrical) {
            const DirectorFrame f = director_frame(surface, s);
            const double J = dot(g.d1, f.dbeta);
            row.L = {triple(g.d1, f.beta, g.d2), -(dot(f.e3, g.d2) + f.theta * J), -f.theta};
        } else {
            const Vec3 b = surface.direction;
            row.L = {triple(g.d1, b, g.d2), 0.0, 0.0};
        }
        rep.rows[i] = std::move(row);
    });
    if (!rep.rows.empty()) {
        rep.coeff_max_abs.assign(rep.rows.front().c.size(), 0.0);
        bool first = true;
        for (const auto& row : rep.rows) {
            double rowmax = 0;
            for (std::size_t j = 0; j < row.c.size(); ++j) {
                const double a = std::abs(row.c[j]);
                rep.coeff_max_abs[j] = std::max(rep.coeff_max_abs[j], a);
                rowmax = std::max(rowmax, a);
            }
            if (first || rowmax > rep.max_abs) {
                first = false;
                rep.max_abs = rowmax;
                rep.worst_s = row.s;
            }
        }
    }
    return rep;
}

// ---------- planar profiles ----------

namespace {

class FunctionalProfile final : public PlanarCurve {
public:
    FunctionalProfile(std::function<PlanarJet(double)> f, double lo, double hi)
        : f_(std::move(f)), lo_(lo), hi_(hi) {}
    PlanarJet at(double s) const override { return f_(s); }
    double s_min() const override { return lo_; }
    double s_max() const override { return hi_; }

private:
    std::function<PlanarJet(double)> f_;
    double lo_, hi_;
};

class ProfileSolutionCurve final : public PlanarCurve {
public:
    ProfileSolutionCurve(const selfsim::profile::ProfileSolution& sol, const SelfSimParams& params)
        : params_(params) {
        if (sol.states.size() < 2) throw Error("profile_curve: need at least two states");
        states_ = sol.states;
    }
    PlanarJet at(double s) const override {
        const auto& st = states_;
        std::size_t lo = 0, hi = st.size() - 1;
        if (s <= st.front().s) {
            lo = 0;
        } else if (s >= st[hi].s) {
            lo = hi - 1;
        } else {
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                if (st[mid].s <= s)
                    lo = mid;
                else
                    hi = mid;
            }
        }
        const auto& a = st[lo];
        const auto& b = st[lo + 1];
        const double h = b.s - a.s;
        const double x = s - a.s;
        const double ka = selfsim::profile::curvature_at(a, params_);
        const double kb = selfsim::profile::curvature_at(b, params_);
        const auto jx = hermite5(a.x, std::cos(a.theta), -ka * std::sin(a.theta), b.x,
                                 std::cos(b.theta), -kb * std::sin(b.theta), h, x);
        const auto jz = hermite5(a.z, std::sin(a.theta), ka * std::cos(a.theta), b.z,
                                 std::sin(b.theta), kb * std::cos(b.theta), h, x);
        return {jx.value, jz.value, jx.d1, jz.d1, jx.d2, jz.d2};
    }
    double s_min() const override { return states_.front().s; }
    double s_max() const override { return states_.back().s; }

private:
    std::vector<selfsim::profile::ProfileState> states_;
    SelfSimParams params_;
};

} // namespace

std::shared_ptr<PlanarCurve> circle_profile(double r) {
    if (!(r > 0)) throw Error("circle_profile: radius must be positive");
    return std::make_shared<FunctionalProfile>(
        [r](double s) {
            const double c = std::cos(s / r), sn = std::sin(s / r);
            return PlanarJet{r * c, r * sn, -sn, c, -c / r, -sn / r};
        },
        0.0, 2.0 * 3.14159265358979323846 * r);
}

std::shared_ptr<PlanarCurve> line_profile(double x0, double z0, double theta) {
    const double c = std::cos(theta), sn = std::sin(theta);
    return std::make_shared<FunctionalProfile>(
        [=](double s) {
            return PlanarJet{x0 + c * s, z0 + sn * s, c, sn, 0.0, 0.0};
        },
        -1e9, 1e9);
}

std::shared_ptr<PlanarCurve> functional_profile(std::function<PlanarJet(double)> f, double s_min,
                                                double s_max) {
    return std::make_shared<FunctionalProfile>(std::move(f), s_min, s_max);
}

std::shared_ptr<PlanarCurve> profile_curve(const selfsim::profile::ProfileSolution& sol,
                                           const SelfSimParams& params) {
    return std::make_shared<ProfileSolutionCurve>(sol, params);
}

SurfacePatch cylindrical_patch(const std::shared_ptr<PlanarCurve>& profile, const Vec3& direction) {
    SurfacePatch patch;
    const Vec3 d = direction.normalized();
    patch.domain = {-5.0, 5.0, profile->s_min(), profile->s_max()};
    patch.value = [profile, d](double u, double v) {
        const PlanarJet j = profile->at(v);
        return d * u + Vec3{j.x, 0.0, j.z};
    };
    patch.jet = [profile, d](double u, double v) {
        const PlanarJet pj = profile->at(v);
        PatchJet j;
        j.X = d * u + Vec3{pj.x, 0.0, pj.z};
        j.Xs = d;
        j.Xt = {pj.dx, 0.0, pj.dz};
        j.Xtt = {pj.ddx, 0.0, pj.ddz};
        return j;
    };
    return patch;
}

} // namespace selfsim::ruled
