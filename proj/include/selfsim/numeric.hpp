#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "selfsim/errors.hpp"

namespace selfsim::numeric {

// ---------- polynomials (coefficients ascending: c[0] + c[1] t + ...) ----------

double poly_eval(const std::vector<double>& c, double t);
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);

// Chebyshev points of the first kind mapped to [a, b], ascending.
std::vector<double> cheb_nodes(std::size_t n, double a, double b);

// ---------- linear algebra ----------

// Least squares min |Ax - b| via Householder QR. A is row-major m x n, m >= n.
std::vector<double> lstsq(std::vector<double> a, std::size_t m, std::size_t n, std::vector<double> b);

// Fit a polynomial of given degree through (t_i, q_i) samples, least squares,
// internally scaled by max|t| for conditioning.
std::vector<double> fit_poly(const std::vector<double>& ts, const std::vector<double>& qs, std::size_t degree);

// Banded linear system, unpivoted LU. kl subdiagonals, ku superdiagonals.
class BandMatrix {
public:
    BandMatrix(std::size_t n, std::size_t kl, std::size_t ku);
    double& at(std::size_t i, std::size_t j); // |i - j| must be inside the band
    std::vector<double> solve(std::vector<double> rhs); // destroys the factorization in place

private:
    std::size_t n_, kl_, ku_;
    std::vector<double> ab_;
};

// ---------- quintic interpolating spline (C4, not-a-knot) ----------

// Interpolates (x_i, y_i) with a degree-5 B-spline; derivatives up to order 3
// are continuous everywhere. Falls back to a single polynomial when fewer than
// 7 sites are given.
class QuinticSpline {
public:
    QuinticSpline() = default;
    static QuinticSpline fit(const std::vector<double>& x, const std::vector<double>& y);

    double eval(double x, int der = 0) const;
    double x_min() const { return xmin_; }
    double x_max() const { return xmax_; }

private:
    // B-spline representation
    std::vector<double> knots_;
    std::vector<double> coef_;
    int degree_ = 5;
    bool poly_fallback_ = false;
    std::vector<double> pcoef_; // ascending in (x - pshift_), used when poly_fallback_
    double pshift_ = 0.0;
    double xmin_ = 0.0, xmax_ = 0.0;
};

// ---------- ODE drivers ----------
//
// State arithmetic is carried in long double so that fixed-step convergence
// studies at small steps are not drowned by accumulation round-off.

template <std::size_t N>
using OdeState = std::array<long double, N>;

// Fixed-step classic RK4 from s0 to s1 (h > 0, final partial step shortened).
// observer(s, y) is called after accepting each step, and once with the
// initial state; returning false stops the integration early.
template <std::size_t N, typename Rhs, typename Observer>
long double rk4_integrate(Rhs&& rhs, OdeState<N>& y, long double s0, long double s1,
                          long double h, Observer&& observer) {
    auto axpy = [](OdeState<N> base, long double a, const OdeState<N>& k) {
        for (std::size_t i = 0; i < N; ++i) base[i] += a * k[i];
        return base;
    };
    long double s = s0;
    if (!observer(s, y)) return s;
    while (s < s1) {
        long double hh = h;
        if (s + hh > s1) hh = s1 - s;
        if (hh <= 0) break;
        const OdeState<N> k1 = rhs(s, y);
        const OdeState<N> k2 = rhs(s + hh / 2, axpy(y, hh / 2, k1));
        const OdeState<N> k3 = rhs(s + hh / 2, axpy(y, hh / 2, k2));
        const OdeState<N> k4 = rhs(s + hh, axpy(y, hh, k3));
        for (std::size_t i = 0; i < N; ++i)
            y[i] += hh / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        s += hh;
        if (!observer(s, y)) break;
    }
    return s;
}

// Embedded Runge-Kutta-Fehlberg 4(5), propagating the 4th-order solution.
// Throws StepUnderflow when the accepted step would fall below h_floor.
template <std::size_t N, typename Rhs, typename Observer>
long double rkf45_integrate(Rhs&& rhs, OdeState<N>& y, long double s0, long double s1,
                            double abs_tol, double rel_tol, Observer&& observer,
                            long double h_floor = 1e-12L) {
    static constexpr long double c2 = 1.0L / 4, c3 = 3.0L / 8, c4 = 12.0L / 13, c5 = 1.0L, c6 = 1.0L / 2;
    static constexpr long double a21 = 1.0L / 4;
    static constexpr long double a31 = 3.0L / 32, a32 = 9.0L / 32;
    static constexpr long double a41 = 1932.0L / 2197, a42 = -7200.0L / 2197, a43 = 7296.0L / 2197;
    static constexpr long double a51 = 439.0L / 216, a52 = -8.0L, a53 = 3680.0L / 513, a54 = -845.0L / 4104;
    static constexpr long double a61 = -8.0L / 27, a62 = 2.0L, a63 = -3544.0L / 2565, a64 = 1859.0L / 4104,
                                 a65 = -11.0L / 40;
    static constexpr long double b1 = 25.0L / 216, b3 = 1408.0L / 2565, b4 = 2197.0L / 4104, b5 = -1.0L / 5;
    static constexpr long double e1 = 1.0L / 360, e3 = -128.0L / 4275, e4 = -2197.0L / 75240, e5 = 1.0L / 50,
                                 e6 = 2.0L / 55;

    auto comb = [](const OdeState<N>& base,
                   std::initializer_list<std::pair<long double, const OdeState<N>*>> terms,
                   long double h) {
        OdeState<N> r = base;
        for (const auto& [a, k] : terms)
            for (std::size_t i = 0; i < N; ++i) r[i] += h * a * (*k)[i];
        return r;
    };

    long double s = s0;
    long double h = (s1 - s0) / 100;
    if (!observer(s, y)) return s;
    while (s < s1) {
        if (s + h > s1) h = s1 - s;
        const OdeState<N> k1 = rhs(s, y);
        const OdeState<N> k2 = rhs(s + c2 * h, comb(y, {{a21, &k1}}, h));
        const OdeState<N> k3 = rhs(s + c3 * h, comb(y, {{a31, &k1}, {a32, &k2}}, h));
        const OdeState<N> k4 = rhs(s + c4 * h, comb(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
        const OdeState<N> k5 = rhs(s + c5 * h, comb(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
        const OdeState<N> k6 =
            rhs(s + c6 * h, comb(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));

        long double err = 0;
        OdeState<N> ynew = y;
        for (std::size_t i = 0; i < N; ++i) {
            ynew[i] += h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i]);
            const long double ei =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i]);
            const long double sc = abs_tol + rel_tol * std::fabs(ynew[i]);
            const long double r = std::fabs(ei) / sc;
            if (r > err) err = r;
        }
        if (err <= 1.0L) {
            y = ynew;
            s += h;
            if (!observer(s, y)) break;
        }
        long double fac = err > 0 ? 0.84L * std::pow(err, -0.25L) : 4.0L;
        if (fac < 0.1L) fac = 0.1L;
        if (fac > 4.0L) fac = 4.0L;
        h *= fac;
        if (s < s1 && h < h_floor)
            throw StepUnderflow("adaptive step size underflow below 1e-12");
    }
    return s;
}

// ---------- deterministic data parallelism ----------

// Runs fn(i) for i in [0, n) over a small thread pool; the number of workers
// is capped by the SELFSIM_THREADS environment variable. Work is partitioned
// by index so writes into index-addressed slots stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace selfsim::numeric
