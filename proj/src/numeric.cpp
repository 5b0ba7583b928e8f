#include "selfsim/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace selfsim::numeric {

double poly_eval(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
    return acc;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<double> cheb_nodes(std::size_t n, double a, double b) {
    std::vector<double> x(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < n; ++k)
        x[n - 1 - k] = mid + half * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
    return x;
}

std::vector<double> lstsq(std::vector<double> a, std::size_t m, std::size_t n, std::vector<double> b) {
    if (m < n || b.size() != m) throw Error("lstsq: bad dimensions");
    // Householder QR, working on the row-major matrix in place.
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += A(i, k) * A(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) throw Error("lstsq: rank deficient matrix");
        if (A(k, k) < 0) norm = -norm; // v_k = 1 + |x_k|/norm stays away from zero
        for (std::size_t i = k; i < m; ++i) A(i, k) /= norm;
        A(k, k) += 1.0;
        for (std::size_t j = k + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += A(i, k) * A(i, j);
            s = -s / A(k, k);
            for (std::size_t i = k; i < m; ++i) A(i, j) += s * A(i, k);
        }
        double s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += A(i, k) * b[i];
        s = -s / A(k, k);
        for (std::size_t i = k; i < m; ++i) b[i] += s * A(i, k);
        A(k, k) = -norm; // R's diagonal: the reflector maps the column to -norm * e_k
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A(k, j) * x[j];
        x[k] = s / A(k, k);
    }
    return x;
}

std::vector<double> fit_poly(const std::vector<double>& ts, const std::vector<double>& qs,
                             std::size_t degree) {
    const std::size_t m = ts.size(), n = degree + 1;
    if (qs.size() != m || m < n) throw Error("fit_poly: need at least degree+1 samples");
    double scale = 0.0;
    for (double t : ts) scale = std::max(scale, std::abs(t));
    if (scale == 0.0) scale = 1.0;
    std::vector<double> a(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        double p = 1.0;
        const double tau = ts[i] / scale;
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = p;
            p *= tau;
        }
    }
    std::vector<double> c = lstsq(std::move(a), m, n, qs);
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        c[j] /= p;
        p *= scale;
    }
    return c;
}

// ---------- band matrix ----------

BandMatrix::BandMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ab_((kl + ku + 1) * n, 0.0) {}

double& BandMatrix::at(std::size_t i, std::size_t j) {
    // row i, column j with |i - j| inside the band; diagonal-major storage
    if (j + kl_ < i || i + ku_ < j) throw Error("BandMatrix: entry outside band");
    return ab_[(ku_ + i - j) * n_ + j];
}

std::vector<double> BandMatrix::solve(std::vector<double> rhs) {
    if (rhs.size() != n_) throw Error("BandMatrix: rhs size mismatch");
    // Unpivoted band LU (Doolittle). Collocation matrices of interpolating
    // splines are totally positive, which makes this stable in practice.
    auto at_ = [&](std::size_t i, std::size_t j) -> double& {
        return ab_[(ku_ + i - j) * n_ + j];
    };
    for (std::size_t k = 0; k + 1 < n_; ++k) {
        const double piv = at_(k, k);
        if (piv == 0.0) throw Error("BandMatrix: zero pivot");
        const std::size_t iend = std::min(n_ - 1, k + kl_);
        const std::size_t jend = std::min(n_ - 1, k + ku_);
        for (std::size_t i = k + 1; i <= iend; ++i) {
            const double l = at_(i, k) / piv;
            at_(i, k) = l;
            for (std::size_t j = k + 1; j <= jend; ++j) at_(i, j) -= l * at_(k, j);
            rhs[i] -= l * rhs[k];
        }
    }
    for (std::size_t k = n_; k-- > 0;) {
        const std::size_t jend = std::min(n_ - 1, k + ku_);
        double s = rhs[k];
        for (std::size_t j = k + 1; j <= jend; ++j) s -= at_(k, j) * rhs[j];
        rhs[k] = s / at_(k, k);
    }
    return rhs;
}

// ---------- B-spline machinery ----------

namespace {

std::size_t find_span(const std::vector<double>& t, int k, std::size_t nbasis, double x) {
    if (x >= t[nbasis]) return nbasis - 1;
    if (x <= t[k]) return k;
    std::size_t lo = k, hi = nbasis;
    while (true) {
        const std::size_t mid = (lo + hi) / 2;
        if (x < t[mid])
            hi = mid;
        else if (x >= t[mid + 1])
            lo = mid;
        else
            return mid;
    }
}

// Values and derivatives of the k+1 B-spline basis functions that are nonzero
// on span i, evaluated at x (the NURBS-book DersBasisFuns algorithm).
void basis_ders(const std::vector<double>& t, int k, std::size_t i, double x, int nders,
                std::vector<double>& out) {
    const int K = k;
    std::vector<double> ndu((K + 1) * (K + 1)), left(K + 1), right(K + 1);
    auto NDU = [&](int a, int b) -> double& { return ndu[a * (K + 1) + b]; };
    NDU(0, 0) = 1.0;
    for (int j = 1; j <= K; ++j) {
        left[j] = x - t[i + 1 - j];
        right[j] = t[i + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            NDU(j, r) = right[r + 1] + left[j - r];
            const double temp = NDU(r, j - 1) / NDU(j, r);
            NDU(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        NDU(j, j) = saved;
    }
    out.assign((nders + 1) * (K + 1), 0.0);
    auto DER = [&](int d, int j) -> double& { return out[d * (K + 1) + j]; };
    for (int j = 0; j <= K; ++j) DER(0, j) = NDU(j, K);
    std::vector<double> a(2 * (K + 1));
    auto A = [&](int r, int c) -> double& { return a[r * (K + 1) + c]; };
    for (int r = 0; r <= K; ++r) {
        int s1 = 0, s2 = 1;
        A(0, 0) = 1.0;
        for (int d = 1; d <= nders; ++d) {
            double dd = 0.0;
            const int rk = r - d, pk = K - d;
            if (r >= d) {
                A(s2, 0) = A(s1, 0) / NDU(pk + 1, rk);
                dd = A(s2, 0) * NDU(rk, pk);
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = r - 1 <= pk ? d - 1 : K - r;
            for (int j = j1; j <= j2; ++j) {
                A(s2, j) = (A(s1, j) - A(s1, j - 1)) / NDU(pk + 1, rk + j);
                dd += A(s2, j) * NDU(rk + j, pk);
            }
            if (r <= pk) {
                A(s2, d) = -A(s1, d - 1) / NDU(pk + 1, r);
                dd += A(s2, d) * NDU(r, pk);
            }
            DER(d, r) = dd;
            std::swap(s1, s2);
        }
    }
    double rr = K;
    for (int d = 1; d <= nders; ++d) {
        for (int j = 0; j <= K; ++j) DER(d, j) *= rr;
        rr *= (K - d);
    }
}

} // namespace

QuinticSpline QuinticSpline::fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw Error("QuinticSpline: need >= 2 samples of equal length");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x[i] < x[i + 1])) throw Error("QuinticSpline: x must be strictly increasing");

    QuinticSpline sp;
    sp.xmin_ = x.front();
    sp.xmax_ = x.back();

    if (n < 7) {
        // Short tables: a single interpolating polynomial of degree n-1,
        // expanded around the interval midpoint.
        sp.poly_fallback_ = true;
        sp.pshift_ = 0.5 * (x.front() + x.back());
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            double p = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                a[i * n + j] = p;
                p *= x[i] - sp.pshift_;
            }
        }
        sp.pcoef_ = lstsq(std::move(a), n, n, y);
        return sp;
    }

    const int k = 5;
    // not-a-knot: drop the first and last (k-1)/2+1 interior sites from the knots
    sp.knots_.assign(k + 1, x.front());
    for (std::size_t i = 3; i + 3 < n; ++i) sp.knots_.push_back(x[i]);
    sp.knots_.insert(sp.knots_.end(), k + 1, x.back());
    const std::size_t nbasis = sp.knots_.size() - k - 1;
    if (nbasis != n) throw Error("QuinticSpline: internal knot count mismatch");

    BandMatrix band(n, k, k);
    std::vector<double> vals;
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t span = find_span(sp.knots_, k, nbasis, x[r]);
        basis_ders(sp.knots_, k, span, x[r], 0, vals);
        for (int j = 0; j <= k; ++j) {
            const std::size_t col = span - k + j;
            if (vals[j] != 0.0 || col == r) band.at(r, col) = vals[j];
        }
    }
    sp.coef_ = band.solve(y);
    return sp;
}

double QuinticSpline::eval(double x, int der) const {
    if (der < 0 || der > 5) throw Error("QuinticSpline: derivative order out of range");
    if (poly_fallback_) {
        std::vector<double> c = pcoef_;
        for (int d = 0; d < der; ++d) {
            for (std::size_t j = 1; j < c.size(); ++j) c[j - 1] = j * c[j];
            if (!c.empty()) c.pop_back();
        }
        return poly_eval(c, x - pshift_);
    }
    const int k = degree_;
    const std::size_t nbasis = knots_.size() - k - 1;
    const std::size_t span = find_span(knots_, k, nbasis, x);
    std::vector<double> ders;
    basis_ders(knots_, k, span, x, der, ders);
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += ders[der * (k + 1) + j] * coef_[span - k + j];
    return acc;
}

// ---------- parallel_for ----------

namespace {
std::size_t worker_cap() {
    if (const char* env = std::getenv("SELFSIM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return (std::size_t)v;
    }
    const std::size_t hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}
} // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_cap(), std::max<std::size_t>(n, 1));
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace selfsim::numeric
