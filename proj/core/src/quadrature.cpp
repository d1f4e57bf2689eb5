#include "ocad/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ocad/errors.hpp"

namespace ocad {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

// Unnormalized Legendre P_n(x) and P_n'(x).
void legendre_pair(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int m = 1; m < n; ++m) {
        const double p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    // Only used away from +-1.
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// Newton on f with derivative df, starting at x0. Stops when the step is
// below kNewtonTol in absolute value.
template <class F>
double newton_root(F&& f_and_df, double x0, const char* what, int n) {
    double x = x0;
    for (int it = 0; it < kNewtonMaxIter; ++it) {
        double f, df;
        f_and_df(x, f, df);
        const double dx = f / df;
        x -= dx;
        if (std::abs(dx) <= kNewtonTol) return x;
    }
    // One more evaluation can land exactly on the root; accept a step below
    // a few ulps as converged since the iteration is cycling there.
    double f, df;
    f_and_df(x, f, df);
    if (std::abs(f / df) <= 4.0 * std::numeric_limits<double>::epsilon()) return x;
    throw NumericError(std::string(what) + ": Newton did not converge for n=" + std::to_string(n) +
                       " near x0=" + std::to_string(x0));
}

void mirror(std::vector<double>& nodes, std::vector<double>& weights) {
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        nodes[i] = -nodes[j];
        weights[i] = weights[j];
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

}  // namespace

QuadRule1D gauss(int Q) {
    if (Q < 1) throw std::invalid_argument("gauss: Q must be >= 1, got " + std::to_string(Q));
    QuadRule1D r;
    r.nodes.resize(Q);
    r.weights.resize(Q);
    r.exact_degree = 2 * Q - 1;
    for (int i = 0; i < Q; ++i) {
        // Chebyshev guess; nodes come out ascending.
        const double x0 = -std::cos(std::numbers::pi * (i + 0.75) / (Q + 0.5));
        const double x = newton_root(
            [Q](double t, double& f, double& df) { legendre_pair(Q, t, f, df); }, x0, "gauss", Q);
        double p, dp;
        legendre_pair(Q, x, p, dp);
        r.nodes[i] = x;
        r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    mirror(r.nodes, r.weights);
    if (Q % 2 == 1) {
        double p, dp;
        legendre_pair(Q, 0.0, p, dp);
        r.weights[Q / 2] = 1.0 / (dp * dp);
    }
    return r;
}

QuadRule1D gauss_lobatto(int L) {
    if (L < 2) throw std::invalid_argument("gauss_lobatto: L must be >= 2, got " + std::to_string(L));
    QuadRule1D r;
    r.nodes.resize(L);
    r.weights.resize(L);
    r.exact_degree = 2 * L - 3;
    const int n = L - 1;
    const double w_end = 1.0 / (static_cast<double>(L) * (L - 1));
    r.nodes.front() = -1.0;
    r.nodes.back() = 1.0;
    r.weights.front() = w_end;
    r.weights.back() = w_end;
    // Interior nodes are roots of P_n'. With g = (1-x^2) P_n' one has
    // g' = -n(n+1) P_n, so Newton on P_n' uses P_n'' = (2x P_n' - n(n+1) P_n)/(1-x^2).
    for (int i = 1; i < L - 1; ++i) {
        const double x0 = -std::cos(std::numbers::pi * i / n);
        const double x = newton_root(
            [n](double t, double& f, double& df) {
                double p, dp;
                legendre_pair(n, t, p, dp);
                f = dp;
                df = (2.0 * t * dp - n * (n + 1.0) * p) / (1.0 - t * t);
            },
            x0, "gauss_lobatto", L);
        double p, dp;
        legendre_pair(n, x, p, dp);
        r.nodes[i] = x;
        r.weights[i] = w_end / (p * p);
    }
    mirror(r.nodes, r.weights);
    if (L % 2 == 1) {
        double p, dp;
        legendre_pair(n, 0.0, p, dp);
        r.weights[L / 2] = w_end / (p * p);
    }
    return r;
}

int lobatto_L_for_degree(int k) {
    if (k < 1) throw std::invalid_argument("lobatto_L_for_degree: k must be >= 1");
    return (k + 4) / 2;
}

}  // namespace ocad
