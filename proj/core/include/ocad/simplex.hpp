#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ocad {

enum class LPStatus { optimal, infeasible, unbounded, iteration_limit };

struct LPResult {
    LPStatus status = LPStatus::infeasible;
    double objective = 0.0;
    Eigen::VectorXd x;
    int iterations = 0;
};

// maximize c^T x  subject to  A x = b,  x >= 0.
// Dense two-phase tableau simplex meant for a few dozen rows. Dantzig pricing,
// switching to Bland's rule after a run of degenerate pivots.
LPResult simplex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                     double tol = 1e-11, int max_iter = 100000);

}  // namespace ocad
