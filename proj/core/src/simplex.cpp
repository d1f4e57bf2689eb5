#include "ocad/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ocad {

namespace {

class Tableau {
public:
    // Rows 0..m-1 are constraints, row m is the objective (reduced costs,
    // stored as z_j - c_j so that negative entries improve a maximization).
    Tableau(int m, int ncols) : m_(m), n_(ncols), t_(Eigen::MatrixXd::Zero(m + 1, ncols + 1)), basis_(m, -1) {}

    double& at(int r, int c) { return t_(r, c); }
    double rhs(int r) const { return t_(r, n_); }
    double& rhs(int r) { return t_(r, n_); }
    std::vector<int>& basis() { return basis_; }

    void pivot(int r, int c) {
        const double p = t_(r, c);
        t_.row(r) /= p;
        for (int i = 0; i <= m_; ++i) {
            if (i == r) continue;
            const double f = t_(i, c);
            if (f != 0.0) t_.row(i) -= f * t_.row(r);
        }
        basis_[r] = c;
    }

    // Runs the simplex on columns [0, active_cols). Returns status.
    LPStatus run(int active_cols, double tol, int max_iter, int& iters) {
        int stall = 0;
        double last_obj = t_(m_, n_);
        for (; iters < max_iter; ++iters) {
            const bool bland = stall > 50;
            int enter = -1;
            double best = -tol;
            for (int j = 0; j < active_cols; ++j) {
                const double rc = t_(m_, j);
                if (rc < best) {
                    enter = j;
                    if (bland) break;
                    best = rc;
                }
            }
            if (enter < 0) return LPStatus::optimal;
            int leave = -1;
            double ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                const double a = t_(i, enter);
                if (a > tol) {
                    const double r = t_(i, n_) / a;
                    if (r < ratio - 1e-14 || (std::abs(r - ratio) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
                        ratio = r;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return LPStatus::unbounded;
            pivot(leave, enter);
            const double obj = t_(m_, n_);
            stall = std::abs(obj - last_obj) <= 1e-15 ? stall + 1 : 0;
            last_obj = obj;
        }
        return LPStatus::iteration_limit;
    }

    Eigen::MatrixXd& raw() { return t_; }

private:
    int m_;
    int n_;
    Eigen::MatrixXd t_;
    std::vector<int> basis_;
};

}  // namespace

LPResult simplex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c, double tol,
                     int max_iter) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (b.size() != m || c.size() != n) throw std::invalid_argument("simplex_max: dimension mismatch");
    LPResult res;
    // Columns: n structural, m artificial.
    Tableau t(m, n + m);
    for (int i = 0; i < m; ++i) {
        const double s = b(i) < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) t.at(i, j) = s * A(i, j);
        t.at(i, n + i) = 1.0;
        t.rhs(i) = s * b(i);
        t.basis()[i] = n + i;
    }
    // Phase 1: maximize -sum(artificials). Reduced costs z_j - c_j with
    // c = -1 on artificials: express in terms of the nonbasic columns.
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += t.at(i, j);
        t.at(m, j) = -s;
    }
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += t.rhs(i);
    t.rhs(m) = -s;
    int iters = 0;
    LPStatus st = t.run(n, tol, max_iter, iters);
    if (st == LPStatus::iteration_limit) {
        res.status = st;
        res.iterations = iters;
        return res;
    }
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
        if (t.basis()[i] >= n) infeas += std::abs(t.rhs(i));
    }
    double scale = 1.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(b(i)));
    if (infeas > 1e-9 * scale) {
        res.status = LPStatus::infeasible;
        res.iterations = iters;
        return res;
    }
    // Drive remaining (zero-level) artificials out of the basis.
    std::vector<bool> dead_row(m, false);
    for (int i = 0; i < m; ++i) {
        if (t.basis()[i] < n) continue;
        int col = -1;
        double best = tol;
        for (int j = 0; j < n; ++j) {
            if (std::abs(t.at(i, j)) > best) {
                best = std::abs(t.at(i, j));
                col = j;
            }
        }
        if (col >= 0) {
            t.pivot(i, col);
        } else {
            dead_row[i] = true;  // redundant constraint
        }
    }
    // Phase 2 objective row.
    for (int j = 0; j <= n + m; ++j) t.raw()(m, j) = 0.0;
    for (int j = 0; j < n; ++j) t.at(m, j) = -c(j);
    for (int i = 0; i < m; ++i) {
        const int bj = t.basis()[i];
        if (dead_row[i] || bj >= n) continue;
        const double cb = c(bj);
        if (cb != 0.0) t.raw().row(m) += cb * t.raw().row(i);
    }
    // Keep artificials out: only structural columns may enter.
    st = t.run(n, tol, max_iter, iters);
    res.status = st;
    res.iterations = iters;
    res.x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) {
        const int bj = t.basis()[i];
        if (bj < n) res.x(bj) = t.rhs(i);
    }
    res.objective = c.dot(res.x);
    return res;
}

}  // namespace ocad
