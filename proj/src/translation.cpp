#include "selfsim/translation.hpp"

#include <algorithm>
#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/numeric.hpp"

namespace selfsim::translation {

FnSpec FnSpec::poly(std::vector<double> c) {
    FnSpec s;
    s.fn_ = [c = std::move(c)](double x) {
        Jet3 j;
        // Horner for the value and the first three derivatives
        for (std::size_t i = c.size(); i-- > 0;) {
            j.d3 = j.d3 * x + 3.0 * j.d2;
            j.d2 = j.d2 * x + 2.0 * j.d1;
            j.d1 = j.d1 * x + j.f;
            j.f = j.f * x + c[i];
        }
        return j;
    };
    return s;
}

namespace {

double take(const std::map<std::string, double>& params, const std::string& key, double dflt,
            const char* builtin, std::vector<std::string>& seen) {
    seen.push_back(key);
    const auto it = params.find(key);
    (void)builtin;
    return it == params.end() ? dflt : it->second;
}

void reject_extras(const std::map<std::string, double>& params,
                   const std::vector<std::string>& seen, const std::string& name) {
    for (const auto& [k, v] : params) {
        (void)v;
        if (std::find(seen.begin(), seen.end(), k) == seen.end())
            throw Error("builtin '" + name + "': unknown parameter '" + k + "'");
    }
}

} // namespace

FnSpec FnSpec::builtin(const std::string& name, const std::map<std::string, double>& params) {
    FnSpec s;
    std::vector<std::string> seen;
    if (name == "constant") {
        const double c = take(params, "c", 0.0, "constant", seen);
        reject_extras(params, seen, name);
        s.fn_ = [c](double) { return Jet3{c, 0, 0, 0}; };
    } else if (name == "linear") {
        const double a = take(params, "a", 1.0, "linear", seen);
        const double b = take(params, "b", 0.0, "linear", seen);
        reject_extras(params, seen, name);
        s.fn_ = [a, b](double x) { return Jet3{a * x + b, a, 0, 0}; };
    } else if (name == "sin") {
        const double amp = take(params, "amp", 1.0, "sin", seen);
        const double omega = take(params, "omega", 1.0, "sin", seen);
        const double phase = take(params, "phase", 0.0, "sin", seen);
        reject_extras(params, seen, name);
        s.fn_ = [amp, omega, phase](double x) {
            const double u = omega * x + phase;
            const double sn = std::sin(u), cs = std::cos(u);
            return Jet3{amp * sn, amp * omega * cs, -amp * omega * omega * sn,
                        -amp * omega * omega * omega * cs};
        };
    } else if (name == "exp") {
        const double amp = take(params, "amp", 1.0, "exp", seen);
        const double rate = take(params, "rate", 1.0, "exp", seen);
        reject_extras(params, seen, name);
        s.fn_ = [amp, rate](double x) {
            const double e = amp * std::exp(rate * x);
            return Jet3{e, rate * e, rate * rate * e, rate * rate * rate * e};
        };
    } else if (name == "powerlaw") {
        const double c = take(params, "c", 1.0, "powerlaw", seen);
        const double k = take(params, "k", 0.0, "powerlaw", seen);
        const double p = take(params, "p", 2.0 / 3.0, "powerlaw", seen);
        reject_extras(params, seen, name);
        s.fn_ = [c, k, p](double x) {
            if (!(x > 0)) throw Error("powerlaw builtin: requires x > 0");
            const double xp = std::pow(x, p);
            return Jet3{c * xp + k, c * p * xp / x, c * p * (p - 1) * xp / (x * x),
                        c * p * (p - 1) * (p - 2) * xp / (x * x * x)};
        };
    } else {
        throw UnknownBuiltin(name);
    }
    return s;
}

FnSpec FnSpec::table(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto sp = numeric::QuinticSpline::fit(xs, ys);
    FnSpec s;
    s.fn_ = [sp](double x) {
        return Jet3{sp.eval(x, 0), sp.eval(x, 1), sp.eval(x, 2), sp.eval(x, 3)};
    };
    return s;
}

double translation_residual(const TranslationSurface& surface, const SelfSimParams& params,
                            double x, double y) {
    const auto F = surface.f.eval(x);
    const auto G = surface.g.eval(y);
    const double w = 1.0 + F.d1 * F.d1 + G.d1 * G.d1;
    return (1.0 + G.d1 * G.d1) * F.d2 + (1.0 + F.d1 * F.d1) * G.d2 -
           params.alpha * (-x * F.d1 - y * G.d1 + F.f + G.f) * w -
           params.lambda * w * std::sqrt(w);
}

double separation_diagnostic(const TranslationSurface& surface, const SelfSimParams& params,
                             double x, double y) {
    const auto F = surface.f.eval(x);
    const auto G = surface.g.eval(y);
    const double w = 1.0 + F.d1 * F.d1 + G.d1 * G.d1;
    return 2.0 * (F.d3 + params.alpha * x * F.d2) * G.d1 * G.d2 +
           2.0 * (G.d3 + params.alpha * y * G.d2) * F.d1 * F.d2 -
           3.0 * params.lambda * F.d1 * F.d2 * G.d1 * G.d2 / std::sqrt(w);
}

double separation_constant(const FnSpec& f, double alpha, double x) {
    const auto F = f.eval(x);
    if (std::abs(F.d1 * F.d2) <= 1e-12)
        throw DegenerateDerivative("separation_constant: f' f'' vanishes at this point");
    return 0.5 * (F.d3 / (F.d1 * F.d2) + alpha * x / F.d1);
}

std::pair<double, double> first_integral_residuals(const FnSpec& f, const SeparationConstants& c,
                                                   double alpha, double x) {
    const auto F = f.eval(x);
    const double r1 = F.d2 + alpha * x * F.d1 - alpha * F.f - c.a * F.d1 * F.d1 - c.m;
    const double r2 =
        (c.n + c.a - alpha * F.f) * F.d1 * F.d1 + alpha * x * F.d1 * F.d1 * F.d1 - c.b;
    return {r1, r2};
}

std::pair<double, double> first_integral_residuals_g(const FnSpec& g, const SeparationConstants& c,
                                                     double alpha, double y) {
    const auto G = g.eval(y);
    const double r1 = G.d2 + alpha * y * G.d1 - alpha * G.f + c.a * G.d1 * G.d1 - c.n;
    const double r2 = (c.a - c.m + alpha * G.f) * G.d1 * G.d1 -
                      alpha * y * G.d1 * G.d1 * G.d1 - c.m - c.n - c.b;
    return {r1, r2};
}

std::array<double, 4> powerlaw_expansion(const PowerlawParams& p, const SeparationConstants& c,
                                         double alpha) {
    return {2.0 * p.c / 9.0, 4.0 * c.a * p.c * p.c / 9.0, alpha * p.k + c.m, alpha * p.c / 3.0};
}

std::array<double, 4> powerlaw_published_coeffs(const PowerlawParams& p, const SeparationConstants& c,
                                            double alpha) {
    return {4.0 * p.c / 9.0, 4.0 * c.a * p.c * p.c / 9.0, alpha * p.k + c.m, alpha * p.c / 3.0};
}

std::array<double, 4> powerlaw_sampling_coeffs(const PowerlawParams& p,
                                               const SeparationConstants& c, double alpha,
                                               const std::array<double, 4>& nodes) {
    const FnSpec f = FnSpec::builtin("powerlaw", {{"c", p.c}, {"k", p.k}});
    std::vector<double> a(16), b(4);
    for (std::size_t i = 0; i < 4; ++i) {
        const double x = nodes[i];
        if (!(x > 0)) throw Error("powerlaw_sampling_coeffs: nodes must be positive");
        const double u = std::cbrt(x * x); // x^{2/3}
        a[i * 4 + 0] = 1.0 / (u * u);
        a[i * 4 + 1] = 1.0 / u;
        a[i * 4 + 2] = 1.0;
        a[i * 4 + 3] = u;
        b[i] = -first_integral_residuals(f, c, alpha, x).first;
    }
    const auto sol = numeric::lstsq(std::move(a), 4, 4, std::move(b));
    return {sol[0], sol[1], sol[2], sol[3]};
}

double nonzero_lambda_obstruction(const TranslationSurface& surface, const SelfSimParams& params,
                                  double x, double y) {
    const auto F = surface.f.eval(x);
    const auto G = surface.g.eval(y);
    const double w = 1.0 + F.d1 * F.d1 + G.d1 * G.d1;
    return 9.0 * params.lambda * F.d1 * F.d2 * G.d1 * G.d2 / (w * w * std::sqrt(w));
}

SurfacePatch to_patch(const TranslationSurface& surface) {
    SurfacePatch patch;
    patch.domain = {surface.x0, surface.x1, surface.y0, surface.y1};
    const FnSpec f = surface.f, g = surface.g;
    patch.value = [f, g](double x, double y) { return Vec3{x, y, f.eval(x).f + g.eval(y).f}; };
    patch.jet = [f, g](double x, double y) {
        const auto F = f.eval(x);
        const auto G = g.eval(y);
        PatchJet j;
        j.X = {x, y, F.f + G.f};
        j.Xs = {1, 0, F.d1};
        j.Xt = {0, 1, G.d1};
        j.Xss = {0, 0, F.d2};
        j.Xst = {0, 0, 0};
        j.Xtt = {0, 0, G.d2};
        return j;
    };
    return patch;
}

} // namespace selfsim::translation
