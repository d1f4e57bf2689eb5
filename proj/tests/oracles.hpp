#pragma once

// Reference computations used only by the tests. Each one takes a route that
// differs from the library's: eigen-solves instead of Newton root finding,
// monomial bases instead of Legendre, direct flux sums instead of the weak form.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

struct Rule {
    std::vector<double> x, w;  // weights sum to one
};

// Golub-Welsch for Gauss-Legendre: eigen-decomposition of the Jacobi matrix.
inline Rule golub_welsch(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    for (int i = 0; i < n; ++i) {
        r.x.push_back(es.eigenvalues()(i));
        r.w.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
    }
    return r;
}

// Plain three-term recurrence, P_n(1) = 1.
inline double legendre_p(int n, double x) {
    double p0 = 1.0, p1 = x;
    if (n == 0) return 1.0;
    for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// Gauss-Lobatto: interior nodes are the eigenvalues of the Jacobi(1,1) matrix,
// weights 1 / (L (L-1) P_{L-1}(x)^2) in the mean-value normalization.
inline Rule lobatto(int L) {
    Rule r;
    r.x.push_back(-1.0);
    const int n = L - 2;
    if (n > 0) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) {
            const double b = std::sqrt(i * (i + 2.0) / ((2.0 * i + 1.0) * (2.0 * i + 3.0)));
            J(i, i - 1) = J(i - 1, i) = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        for (int i = 0; i < n; ++i) r.x.push_back(es.eigenvalues()(i));
    }
    r.x.push_back(1.0);
    for (double x : r.x) {
        const double p = legendre_p(L - 1, x);
        r.w.push_back(1.0 / (L * (L - 1.0) * p * p));
    }
    return r;
}

// Exact normalized moment (1/2) int_{-1}^{1} x^n dx written as a ratio.
inline double mean_power(int n) { return (n % 2) ? 0.0 : 1.0 / (n + 1.0); }

// 2D cell mean of f by a 20x20 Golub-Welsch rule; exact for degree <= 39.
inline double cell_mean(const std::function<double(double, double)>& f) {
    static const Rule g = golub_welsch(20);
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        for (std::size_t j = 0; j < g.x.size(); ++j) s += g.w[i] * g.w[j] * f(g.x[i], g.x[j]);
    return s;
}

// Mean over both x faces (x = -1 and x = +1) and over both y faces.
inline std::pair<double, double> face_means(const std::function<double(double, double)>& f) {
    static const Rule g = golub_welsch(20);
    double fx = 0.0, fy = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        fx += 0.5 * g.w[i] * (f(-1.0, g.x[i]) + f(1.0, g.x[i]));
        fy += 0.5 * g.w[i] * (f(g.x[i], -1.0) + f(g.x[i], 1.0));
    }
    return {fx, fy};
}

// Smallest root in [lo, hi] of a continuous function, found by a fine sign
// scan followed by bisection. NaN if there is no sign change.
inline double smallest_root(const std::function<double(double)>& f, double lo, double hi, int scan = 20000) {
    double a = lo, fa = f(lo);
    for (int i = 1; i <= scan; ++i) {
        const double b = lo + (hi - lo) * i / scan;
        const double fb = f(b);
        if (fa == 0.0) return a;
        if ((fa < 0) != (fb < 0)) {
            double l = a, r = b, fl = fa;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (l + r);
                const double fm = f(mid);
                if ((fm < 0) == (fl < 0)) {
                    l = mid;
                    fl = fm;
                } else {
                    r = mid;
                }
            }
            return 0.5 * (l + r);
        }
        a = b;
        fa = fb;
    }
    return std::nan("");
}

// phi* through the monomial basis of the half space: the largest generalized
// eigenvalue of M_theta v = lambda M_Omega v, solved by Cholesky reduction.
// Exponent pairs (i, j) with i + j <= h (P) or max(i, j) <= h (Q).
inline double phi_star_monomial(bool family_q, int k, double theta) {
    const int h = k / 2;
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i <= h; ++i)
        for (int j = 0; j <= h; ++j)
            if (family_q || i + j <= h) e.emplace_back(i, j);
    const int D = static_cast<int>(e.size());
    Eigen::MatrixXd MO(D, D), MT(D, D);
    for (int a = 0; a < D; ++a) {
        for (int b = 0; b < D; ++b) {
            const int px = e[a].first + e[b].first, py = e[a].second + e[b].second;
            MO(a, b) = mean_power(px) * mean_power(py);
            // x faces: x^px = 1 for even px on both faces, odd cancels
            const double fx = (px % 2 ? 0.0 : 1.0) * mean_power(py);
            const double fy = mean_power(px) * (py % 2 ? 0.0 : 1.0);
            MT(a, b) = (1.0 + theta) * fx + (1.0 - theta) * fy;
        }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(MT, MO, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    return 1.0 / es.eigenvalues().maxCoeff();
}

// 1/(L(L-1)) with L = ceil((k+3)/2), written without the library helper.
inline double lobatto_end_weight(int k) {
    const int L = (k + 4) / 2;  // ceil((k+3)/2)
    return 1.0 / (L * (L - 1.0));
}

}  // namespace oracle
