#include <doctest.h>

#include <cmath>
#include <numbers>

#include "selfsim/profile_ode.hpp"
#include "selfsim/ruled.hpp"
#include "support.hpp"

using namespace selfsim;
using namespace selfsim::ruled;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

RuledSurface helicoid(double s0 = 0.05, double s1 = 2 * kPi) {
    return make_ruled(line_curve({0, 0, 0}, {0, 0, 1}),
                      great_circle_director({1, 0, 0}, {0, 1, 0}), s0, s1);
}
} // namespace

TEST_CASE("synthesize_director with theta = 0 is a great circle") {
    const auto d = synthesize_director([](double) { return 0.0; }, {1, 0, 0}, {0, 1, 0}, 0.0, 6.0);
    for (double s : {0.0, 0.5, 2.0, 5.5}) {
        const auto f = d->at(s);
        CHECK((f.beta - Vec3{std::cos(s), std::sin(s), 0}).norm() < 1e-10);
        CHECK((f.e3 - Vec3{0, 0, 1}).norm() < 1e-10); // e3' = 0
        CHECK(f.theta == 0.0);
    }
}

TEST_CASE("synthesize_director conserves the frame over long spans") {
    const auto d =
        synthesize_director([](double) { return 1.0; }, {1, 0, 0}, {0, 1, 0}, 0.0, 20.0, 1e-3);
    for (double s = 0.0; s <= 20.0; s += 0.37) {
        const auto f = d->at(s);
        CHECK(std::abs(f.beta.norm() - 1.0) <= 1e-9);
        CHECK(std::abs(f.dbeta.norm() - 1.0) <= 1e-9);
        CHECK(std::abs(dot(f.beta, f.dbeta)) <= 1e-9);
        CHECK((f.e3 - cross(f.beta, f.dbeta)).norm() <= 1e-9);
    }
}

TEST_CASE("synthesized director recovers theta from the frame triple product") {
    auto theta_fn = [](double s) { return 0.7 + 0.3 * std::sin(s); };
    const double h = 1e-3;
    const auto d = synthesize_director(theta_fn, {0, 0, 1}, {1, 0, 0}, 0.0, 8.0, h);
    for (double s : {0.4, 2.7, 6.1}) {
        // independent second derivative from finite differences of dbeta
        const Vec3 ddb = (d->at(s + h).dbeta - d->at(s - h).dbeta) / (2 * h);
        const auto f = d->at(s);
        CHECK(std::abs(triple(f.beta, f.dbeta, ddb) - theta_fn(s)) <= 1e-6);
    }
}

TEST_CASE("synthesize_director validates the initial frame") {
    CHECK_THROWS_AS((void)synthesize_director([](double) { return 0.0; }, {1, 0, 0}, {0.5, 0.5, 0},
                                              0.0, 1.0),
                    InvalidInitialFrame);
    CHECK_THROWS_AS((void)synthesize_director([](double) { return 0.0; }, {1, 0, 0}, {1, 0, 0}, 0.0,
                                              1.0),
                    InvalidInitialFrame);
}

TEST_CASE("orthogonalize_directrix leaves orthogonal curves unchanged") {
    const auto director = great_circle_director({1, 0, 0}, {0, 1, 0});
    const auto line = line_curve({0, 0, 0}, {0, 0, 1}); // <gamma', beta> = 0 already
    const auto ortho = orthogonalize_directrix(line, director, 0.0, 5.0);
    for (double s : {0.2, 2.0, 4.8}) {
        CHECK((ortho->at(s).p - line->at(s).p).norm() <= 1e-12);
        CHECK(std::abs(dot(ortho->at(s).d1, director->at(s).beta)) <= 1e-12);
    }
}

TEST_CASE("orthogonalize_directrix produces an orthogonal directrix") {
    const auto director = great_circle_director({1, 0, 0}, {0, 1, 0});
    const auto gamma = helix_curve(0.8, 0.4);
    const auto ortho = orthogonalize_directrix(gamma, director, 0.0, 6.0);
    for (double s = 0.1; s < 6.0; s += 0.23)
        CHECK(std::abs(dot(ortho->at(s).d1, director->at(s).beta)) <= 1e-10);
}

TEST_CASE("orthogonalizing a point directrix stays on the cone") {
    const Vec3 apex{0.4, -0.2, 1.0};
    const auto director = great_circle_director({1, 0, 0}, {0, 0, 1});
    const auto ortho = orthogonalize_directrix(point_curve(apex), director, 0.0, 4.0);
    for (double s : {0.3, 1.9, 3.7}) {
        const Vec3 offset = ortho->at(s).p - apex;
        // still of the form u(s) beta(s): parallel to the ruling through apex
        CHECK(cross(offset, director->at(s).beta).norm() <= 1e-9);
    }
}

TEST_CASE("plane through the origin as a ruled surface has zero coefficients") {
    // directrix v beta' with a great-circle director spans the plane z = 0
    const auto director = great_circle_director({1, 0, 0}, {0, 1, 0});
    const double v = 0.8;
    auto gamma = functional_curve([v, director](double s) {
        const auto f = director->at(s);
        return CurveJet2{f.dbeta * v, f.ddbeta * v, (f.dbeta * -1.0) * v};
    });
    const auto surf = make_ruled(gamma, director, 0.1, 5.0);
    for (double alpha : {-0.5, 1.0})
        for (double s : {0.4, 2.2, 4.7}) {
            const auto c = ruled_coeffs_lambda0(surf, alpha, s);
            for (double ci : c) CHECK(std::abs(ci) <= 1e-9);
        }
}

TEST_CASE("cubic coefficient c3 tracks alpha <e3, gamma>") {
    // in-plane directrix: c3 = 0
    const auto director = great_circle_director({1, 0, 0}, {0, 1, 0});
    const auto inplane = make_ruled(circle_curve({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 2.0), director,
                                    0.1, 4.0);
    for (double s : {0.5, 2.0}) CHECK(std::abs(ruled_coeffs_lambda0(inplane, -0.5, s)[3]) <= 1e-9);

    // helicoid: gamma = (0,0,s), <e3,gamma> = s, so c3 = alpha s
    const auto heli = helicoid();
    for (double s : {0.5, 1.5, 4.0})
        CHECK(ruled_coeffs_lambda0(heli, -0.5, s)[3] == doctest::Approx(-0.5 * s).epsilon(1e-10));
}

TEST_CASE("helicoid coefficients match the sampling oracle and exceed 1e-3") {
    const auto heli = helicoid();
    const double alpha = -0.5;
    double biggest = 0;
    for (double s = 0.3; s <= 2 * kPi; s += 0.33) {
        const auto closed = ruled_coeffs_lambda0(heli, alpha, s);
        const auto fit = testsup::oracle_coeffs_lambda0(heli, alpha, s);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(std::abs(closed[j] - fit[j]) <= 1e-8);
            biggest = std::max(biggest, std::abs(closed[j]));
        }
        // analytic row: alpha s (t + t^3)
        CHECK(closed[0] == doctest::Approx(0.0));
        CHECK(closed[1] == doctest::Approx(alpha * s).epsilon(1e-9));
        CHECK(closed[2] == doctest::Approx(0.0));
        CHECK(closed[3] == doctest::Approx(alpha * s).epsilon(1e-9));
    }
    CHECK(biggest >= 1e-3);
}

TEST_CASE("squared-form coefficients: t^6 and t^0 identities") {
    const auto heli = helicoid();
    const SelfSimParams params{-0.5, 1.0};
    for (double s : {0.7, 2.9, 5.4}) {
        const auto q = ruled_coeffs_squared(heli, params, s);
        const CurveJet2 g = directrix_jet(heli, s);
        const DirectorFrame f = director_frame(heli, s);
        const double B = dot(f.e3, g.p);
        const double A = triple(g.d1, f.beta, g.p);
        const double gamma2 = dot(g.d1, g.d1);
        const double L0 = triple(g.d1, f.beta, g.d2);
        const double l2 = params.lambda * params.lambda;
        // c6 and c0 vanish exactly when the displayed identities hold
        CHECK(q[6] == doctest::Approx(params.alpha * params.alpha * B * B - l2).epsilon(1e-12));
        const double expected_c0 =
            std::pow(params.alpha * gamma2 * A - L0, 2) - l2 * gamma2 * gamma2 * gamma2;
        CHECK(q[0] == doctest::Approx(expected_c0).epsilon(1e-12));
    }
}

TEST_CASE("squared form agrees with the sampling oracle") {
    const auto heli = helicoid();
    const SelfSimParams params{-0.5, 1.0};
    for (double s = 0.4; s <= 2 * kPi; s += 0.61) {
        const auto closed = ruled_coeffs_squared(heli, params, s);
        const auto fit = testsup::oracle_coeffs_squared(heli, params, s);
        for (std::size_t j = 0; j < 7; ++j) CHECK(std::abs(closed[j] - fit[j]) <= 1e-8);
    }
}

TEST_CASE("squared form with lambda = 0 is the square of the cubic") {
    const auto heli = helicoid();
    for (double s : {0.9, 3.3}) {
        const auto p = ruled_coeffs_lambda0(heli, -0.5, s);
        const auto q = ruled_coeffs_squared(heli, {-0.5, 0.0}, s);
        std::vector<double> pp(p.begin(), p.end());
        const auto sq = numeric::poly_mul(pp, pp);
        for (std::size_t j = 0; j < 7; ++j) CHECK(q[j] == doctest::Approx(sq[j]).epsilon(1e-12));
    }
}

TEST_CASE("cylindrical surface over the sqrt(2) circle solves the shrinker case") {
    const auto circle = circle_curve({0, 0, 0}, {1, 0, 0}, {0, 0, 1}, kSqrt2);
    const auto surf = make_cylindrical(circle, {0, 1, 0}, 0.0, 2 * kPi * kSqrt2);
    for (double s = 0.2; s < 2 * kPi * kSqrt2; s += 0.9) {
        const auto c = ruled_coeffs_lambda0(surf, -0.5, s);
        for (double ci : c) CHECK(std::abs(ci) <= 1e-9);
        const auto q = ruled_coeffs_squared(surf, {-0.5, 0.0}, s);
        for (double qi : q) CHECK(std::abs(qi) <= 1e-9);
    }
}

TEST_CASE("conical coefficients") {
    const auto gc = great_circle_director({1, 0, 0}, {0, 1, 0});
    // apex at the origin with lambda = 0: a plane through the origin
    for (double s : {0.3, 1.8}) {
        const auto [c2, c3] = conical_coeffs({0, 0, 0}, gc, {-0.5, 0.0}, s);
        CHECK(std::abs(c2) <= 1e-12);
        CHECK(std::abs(c3) <= 1e-12);
    }
    // apex (0,0,1): (p0, beta', beta) = -1 gives c3 = alpha
    for (double alpha : {-0.5, 1.25})
        for (double s : {0.4, 2.6}) {
            const auto [c2, c3] = conical_coeffs({0, 0, 1}, gc, {alpha, 0.0}, s);
            CHECK(std::abs(c2) <= 1e-12);
            CHECK(c3 == doctest::Approx(alpha).epsilon(1e-12));
        }
    // a non-great-circle director has c2 = -theta != 0 somewhere
    const auto tilted = synthesize_director([](double) { return 0.8; }, {1, 0, 0}, {0, 1, 0}, 0.0, 3.0);
    double cmax = 0;
    for (double s = 0.1; s < 3.0; s += 0.2)
        cmax = std::max(cmax, std::abs(conical_coeffs({0, 0, 1}, tilted, {-0.5, 0.0}, s).first));
    CHECK(cmax > 0.5);
}

TEST_CASE("conical coefficients agree with the sampling oracle") {
    const auto gc = great_circle_director({1, 0, 0}, {0, 1, 0});
    const SelfSimParams params{-0.5, 1.0};
    const auto cone = make_conical({0, 0, 1}, gc, 0.05, 3.0);
    for (double s : {0.5, 1.2, 2.4}) {
        const auto [c2, c3] = conical_coeffs({0, 0, 1}, gc, params, s);
        const auto fit = testsup::oracle_coeffs_conical(cone, params, s);
        CHECK(std::abs(fit[0]) <= 1e-9);
        CHECK(std::abs(fit[1]) <= 1e-9);
        CHECK(std::abs(fit[2] - c2) <= 1e-9);
        CHECK(std::abs(fit[3] - c3) <= 1e-9);
    }
}

TEST_CASE("lambda0 identities on a plane through the origin") {
    const auto director = great_circle_director({1, 0, 0}, {0, 1, 0});
    const auto surf =
        make_ruled(circle_curve({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.5), director, 0.1, 4.0);
    for (double s : {0.5, 1.7, 3.6}) {
        const auto id = identities_lambda0(surf, -0.5, s);
        CHECK(std::abs(id.orth_residual) <= 1e-10);
        CHECK(std::abs(id.s1_residual) <= 1e-9);   // theta = 0 kills it
        CHECK(std::abs(id.s2_residual) <= 1e-9);
        CHECK(std::abs(id.s3_residual) <= 1e-9);
    }
}

TEST_CASE("lambda0 identities exhibit the contradiction surface") {
    // theta = 1 with 1 + alpha v^2 = 0 (alpha = -1/2, v = sqrt 2): the first two
    // identities hold and the third reduces to v^2 theta = 2
    const double alpha = -0.5, v = kSqrt2, theta = 1.0;
    const auto director =
        synthesize_director([theta](double) { return theta; }, {1, 0, 0}, {0, 1, 0}, 0.0, 3.0, 1e-3);
    auto gamma = functional_curve([director, v, theta](double s) {
        const auto f = director->at(s);
        const double u = v * s;
        CurveJet2 j;
        j.p = f.beta * u + f.dbeta * v;
        j.d1 = f.dbeta * (v * s) + f.e3 * (v * theta);
        j.d2 = f.beta * (-v * s) + f.dbeta * (v * (1 - theta * theta)) + f.e3 * (v * s * theta);
        return j;
    });
    RuledSurface surf;
    surf.kind = RuledKind::Generic;
    surf.director = director;
    surf.directrix = gamma; // orthogonal by construction: <gamma', beta> = 0
    surf.s_begin = 0.0;
    surf.s_end = 3.0;
    for (double s : {0.5, 1.5, 2.5}) {
        const auto id = identities_lambda0(surf, alpha, s, 1e-6);
        CHECK(std::abs(id.orth_residual) <= 1e-9);
        CHECK(std::abs(id.v - v) <= 1e-8);
        CHECK(std::abs(id.s1_residual) <= 1e-9);
        CHECK(std::abs(id.s2_residual) <= 1e-8);
        CHECK(id.s3_residual == doctest::Approx(v * v * theta).epsilon(1e-7));
    }
}

TEST_CASE("lambda0 identities reject out-of-plane directrices") {
    const auto heli = helicoid();
    CHECK_THROWS_AS((void)identities_lambda0(heli, -0.5, 2.0), NotInPlane);
}

TEST_CASE("lambda != 0 identities on the plane z = lambda/alpha") {
    const SelfSimParams params{0.8, 1.2};
    const double height = params.lambda / params.alpha;
    const auto director = great_circle_director({1, 0, 0}, {0, 1, 0});
    const auto surf = make_ruled(
        circle_curve({0, 0, height}, {1, 0, 0}, {0, 1, 0}, 1.2), director, 0.1, 4.0);
    for (double s : {0.4, 2.1, 3.8}) {
        const auto id = identities_lambda_nonzero(surf, params, s);
        CHECK(std::abs(id.lambda_residual) <= 1e-9);
        CHECK(id.branch_sign == 1);
        // theta = 0: the theta identity reduces to alpha(A + B J)
        const CurveJet2 g = directrix_jet(surf, s);
        const DirectorFrame f = director_frame(surf, s);
        const double expected = params.alpha * (dot(f.e3, g.p) * dot(g.d1, f.dbeta) +
                                                triple(g.d1, f.beta, g.p));
        CHECK(id.theta_residual == doctest::Approx(expected).epsilon(1e-10));
        // on the plane solution the orthogonal directrix runs along beta', so
        // A = -B J and Gamma = J^2: every identity residual vanishes
        CHECK(std::abs(id.theta_residual) <= 1e-9);
        CHECK(std::abs(id.gamma_residual) <= 1e-9);
    }
}

TEST_CASE("lambda != 0 identities flag a random non-planar ruled surface") {
    const auto surf = make_ruled(helix_curve(1.1, 0.5),
                                 great_circle_director({0, 1, 0}, {0, 0, 1}), 0.1, 5.0);
    double worst = 0;
    for (double s = 0.2; s < 5.0; s += 0.2) {
        const auto id = identities_lambda_nonzero(surf, {-0.5, 1.0}, s);
        worst = std::max({worst, std::abs(id.lambda_residual), std::abs(id.theta_residual),
                          std::abs(id.gamma_residual)});
    }
    CHECK(worst > 1e-3);
}

TEST_CASE("cylindrical_patch over the sqrt(2) circle solves the shrinker case") {
    const auto patch = cylindrical_patch(circle_profile(kSqrt2), {0, -1, 0});
    const auto rep = verify_patch(patch, {-0.5, 0.0}, 12, 12, 1e-10);
    CHECK(rep.pass);
}

TEST_CASE("cylindrical_patch over a line through the origin has residual -lambda") {
    const auto patch = cylindrical_patch(line_profile(0, 0, 0.6), {0, -1, 0});
    const SelfSimParams params{1.3, 0.7};
    for (double u : {-2.0, 1.0})
        for (double v : {-3.0, 0.5, 4.0}) {
            const Frame f = evaluate_frame_closed(patch, u, v);
            CHECK(selfsim_residual(f, patch.value(u, v), params) ==
                  doctest::Approx(-params.lambda).epsilon(1e-12));
        }
}

TEST_CASE("cylindrical_patch residual equals the profile-equation residual") {
    // a profile that does NOT solve the equation for the checked parameters
    const auto profile = circle_profile(1.7);
    const auto patch = cylindrical_patch(profile, {0, -1, 0});
    const SelfSimParams params{-0.5, 0.4};
    for (double v = 0.3; v < 10.0; v += 1.7) {
        const auto j = profile->at(v);
        // kappa - alpha <n, gamma> - lambda with n = tangent rotated +90
        const double expect = (j.dx * j.ddz - j.dz * j.ddx) -
                              params.alpha * (-j.dz * j.x + j.dx * j.z) - params.lambda;
        for (double u : {-5.0, -1.0, 0.0, 2.5, 5.0}) {
            const Frame f = evaluate_frame_closed(patch, u, v);
            const double r = selfsim_residual(f, patch.value(u, v), params);
            CHECK(std::abs(r - expect) <= 1e-10);
        }
    }
}

TEST_CASE("cylindrical_patch residual does not vary along the rulings") {
    auto rng = testsup::make_rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        // random smooth arc-length profile from a random tangent-angle function,
        // positions by cumulative Simpson integration
        const double a0 = testsup::uniform(rng, -1, 1), a1 = testsup::uniform(rng, -1, 1);
        const double w = testsup::uniform(rng, 0.5, 2.0);
        const double h = 1e-3;
        std::vector<double> xs, zs;
        double x = testsup::uniform(rng, -1, 1), z = testsup::uniform(rng, -1, 1);
        for (double s = 0; s <= 6.0 + 1e-9; s += h) {
            xs.push_back(x);
            zs.push_back(z);
            const double th0 = a0 + a1 * std::sin(w * s);
            const double th1 = a0 + a1 * std::sin(w * (s + 0.5 * h));
            const double th2 = a0 + a1 * std::sin(w * (s + h));
            x += h / 6.0 * (std::cos(th0) + 4 * std::cos(th1) + std::cos(th2));
            z += h / 6.0 * (std::sin(th0) + 4 * std::sin(th1) + std::sin(th2));
        }
        auto curve = functional_profile(
            [=](double s) {
                const std::size_t i =
                    std::min<std::size_t>((std::size_t)(s / h), xs.size() - 1);
                const double th = a0 + a1 * std::sin(w * s);
                const double dth = a1 * w * std::cos(w * s);
                return PlanarJet{xs[i], zs[i], std::cos(th), std::sin(th), -dth * std::sin(th),
                                 dth * std::cos(th)};
            },
            0.0, 6.0);
        const auto patch = cylindrical_patch(curve, {0, -1, 0});
        const SelfSimParams params{testsup::uniform(rng, -2, 2), testsup::uniform(rng, -1, 1)};
        for (double v : {0.5, 3.0, 5.5}) {
            double rmin = 1e300, rmax = -1e300;
            for (double u = -5.0; u <= 5.0; u += 1.0) {
                const double r =
                    selfsim_residual(evaluate_frame_closed(patch, u, v), patch.value(u, v), params);
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
            CHECK(rmax - rmin <= 1e-10);
        }
    }
}

TEST_CASE("profile_curve reproduces an integrated circle") {
    const SelfSimParams params{-0.5, 0.0};
    selfsim::profile::OdeConfig cfg;
    cfg.step = 1e-3;
    const auto sol = selfsim::profile::integrate_profile({kSqrt2, 0, kPi / 2, 0}, params,
                                                         2 * kPi * kSqrt2, cfg);
    const auto curve = profile_curve(sol, params);
    for (double s : {0.3, 4.0, 8.0}) {
        const auto j = curve->at(s);
        const double phi = s / kSqrt2 + kPi / 2 - kPi / 2;
        CHECK(j.x == doctest::Approx(kSqrt2 * std::cos(phi)).epsilon(1e-9));
        CHECK(j.z == doctest::Approx(kSqrt2 * std::sin(phi)).epsilon(1e-9));
        CHECK(std::hypot(j.dx, j.dz) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("coefficient report aggregates and locates the worst sample") {
    const auto heli = helicoid();
    std::vector<double> samples;
    for (double s = 0.3; s <= 6.0; s += 0.3) samples.push_back(s);
    const auto rep = build_coeff_report(heli, {-0.5, 0.0}, samples, CoeffForm::Lambda0);
    CHECK(rep.rows.size() == samples.size());
    CHECK(rep.coeff_max_abs.size() == 4);
    // |alpha| s grows along the directrix: worst sample is the last one
    CHECK(rep.worst_s == doctest::Approx(samples.back()));
    CHECK(rep.max_abs == doctest::Approx(0.5 * samples.back()).epsilon(1e-9));
    CHECK(rep.coeff_max_abs[0] <= 1e-12);
    CHECK(rep.coeff_max_abs[2] <= 1e-12);
}

TEST_CASE("degenerate ruled points raise NonImmersed") {
    // gamma = c beta + k gives gamma' = c beta', so E = (c + t)^2 vanishes at
    // t = -c: frame evaluation there must reject the point
    const auto director = great_circle_director({1, 0, 0}, {0, 1, 0});
    const double c = 0.5;
    auto gamma = functional_curve([director, c](double s) {
        const auto f = director->at(s);
        CurveJet2 j;
        j.p = f.beta * c + Vec3{0, 0, 0.2};
        j.d1 = f.dbeta * c;
        j.d2 = f.ddbeta * c;
        return j;
    });
    RuledSurface surf;
    surf.kind = RuledKind::Generic;
    surf.director = director;
    surf.directrix = gamma;
    surf.s_begin = 0.0;
    surf.s_end = 3.0;
    const SurfacePatch patch = to_patch(surf, -2.0, 2.0);
    CHECK_THROWS_AS((void)evaluate_frame_closed(patch, 1.0, -c), NonImmersed);
    // the polynomial coefficients stay finite across the isolated degeneracy
    const auto coeffs = ruled_coeffs_lambda0(surf, -0.5, 1.0);
    for (double ci : coeffs) CHECK(std::isfinite(ci));

    // a cylindrical surface with a singular directrix is rejected outright
    RuledSurface cyl;
    cyl.kind = RuledKind::Cylindrical;
    cyl.direction = Vec3{0, 1, 0};
    cyl.directrix = point_curve({0.3, 0, 0.4});
    cyl.s_begin = 0.0;
    cyl.s_end = 1.0;
    CHECK_THROWS_AS((void)ruled_coeffs_lambda0(cyl, -0.5, 0.5), NonImmersed);
}

TEST_CASE("director_from_table renormalizes to arc length on the sphere") {
    // great circle sampled at a non-uniform parameter speed
    std::vector<double> sig, bx, by, bz;
    for (int i = 0; i <= 400; ++i) {
        const double u = 2.0 * i / 400.0;
        const double phi = u + 0.25 * u * u; // strictly increasing, non-unit speed
        sig.push_back(u);
        bx.push_back(std::cos(phi));
        by.push_back(std::sin(phi));
        bz.push_back(0.0);
    }
    const auto d = director_from_table(sig, bx, by, bz, 1e-2);
    const double total = d->s_max() - d->s_min();
    CHECK(total == doctest::Approx(2.0 + 0.25 * 4.0).epsilon(1e-6)); // phi(2) - phi(0)
    for (double s : {0.2, 1.1, 2.4}) {
        const auto f = d->at(s);
        CHECK(std::abs(f.beta.norm() - 1.0) <= 1e-9);
        CHECK(std::abs(f.dbeta.norm() - 1.0) <= 1e-9);
        CHECK(std::abs(dot(f.beta, f.dbeta)) <= 1e-9);
        CHECK(std::abs(f.theta) <= 1e-5); // a great circle has zero spherical curvature
        // unit speed: beta advances by arc length
        const double h = 1e-4;
        const Vec3 fd = (d->at(s + h).beta - d->at(s - h).beta) / (2 * h);
        CHECK(fd.norm() == doctest::Approx(1.0).epsilon(1e-5));
    }
}
