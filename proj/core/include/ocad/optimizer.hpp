#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ocad/cad.hpp"
#include "ocad/polyspace.hpp"

namespace ocad {

enum class MomentBasis { legendre, monomial };

// Quadratic forms of q^2 over the half-degree space of the CAD's space:
// <q^2> = c^T M_Omega c, <q^2>^x = c^T M_x c, <q^2>^y = c^T M_y c.
struct MomentMatrices {
    SpaceId half_space;
    MomentBasis basis = MomentBasis::legendre;
    Eigen::MatrixXd M_Omega;
    Eigen::MatrixXd M_x;
    Eigen::MatrixXd M_y;

    Eigen::MatrixXd M_theta(double theta) const { return (1.0 + theta) * M_x + (1.0 - theta) * M_y; }
};

SpaceId half_space_of(const SpaceId& space);
MomentMatrices moment_matrices(const SpaceId& space, MomentBasis basis = MomentBasis::legendre);

struct PhiStarResult {
    double value = 0.0;
    Polynomial2D q_star;               // in the half space, <q_star^2> = 1
    std::vector<double> q_legendre;    // same polynomial, tensor-Legendre coefficients
    int eigen_multiplicity = 1;
};

// phi* = 1 / lambda_max(M_theta) in the Legendre basis (M_Omega = I).
PhiStarResult phi_star_sq(const SpaceId& space, double theta);

// phi(p; theta) = <p> / [(1+theta)<p>^x + (1-theta)<p>^y].
double phi_of(const Polynomial2D& p, double theta);

// Criterion #2: p_star nonnegative (101 x 101 grid, -1e-10) and vanishing
// (<= 1e-8) at every expanded internal node of the CAD.
bool check_criterion_2(const SymmetricCAD& cad, const Polynomial2D& p_star);
// Criterion #4: |wbar - phi*| <= tol.
bool check_criterion_4(const SymmetricCAD& cad, double tol = 1e-10);

// ---- numeric OCADs (even k >= 8 in practice, any even k >= 2 works) ----

struct SolverOptions {
    double residual_target = 1e-12;
    int max_iter = 200;
    double dtheta = 0.05;
    int max_bisect = 6;
    double drop_weight = 1e-14;
    double merge_dist = 1e-9;
    bool allow_lp_reseed = true;
    bool force_lp_seed = false;  // skip continuation and start from the LP seed
};

struct ResidualRecord {
    double theta;
    int iter;
    double residual;
};

struct SolveReport {
    SymmetricCAD cad;
    double residual = 0.0;  // infinity norm of the moment + zero-set system
    int iterations = 0;
    int orbit_count = 0;
    bool used_lp_reseed = false;
};

// Residual of the invariant-moment + q* zero-set system for a G_s CAD.
double ocad_system_residual(const SymmetricCAD& cad, const Polynomial2D& q_star);

// Solve at a single theta in [-1,0] starting from warm_start (orbits only
// are used). Without a warm start this runs the continuation from -1.
SolveReport solve_ocad_system(int k, double theta, const std::optional<SymmetricCAD>& warm_start = std::nullopt,
                              const SolverOptions& opt = {}, std::vector<ResidualRecord>* log = nullptr);

struct ContinuationStep {
    double theta;
    double residual;
    int iterations;
    int orbit_count;
    double wbar;
};

struct ContinuationResult {
    SymmetricCAD cad;
    std::vector<ContinuationStep> steps;
};

// March from the analytic theta = -1 OCAD to theta_target in `steps`
// uniform steps (steps <= 0 uses opt.dtheta). theta_target > 0 is served by
// reflection. Odd k reuses k-1.
ContinuationResult continuation_driver(int k, double theta_target, int steps = 0, const SolverOptions& opt = {},
                                       std::vector<ResidualRecord>* log = nullptr);

// Convenience: OCAD for any k, theta. Closed forms for k <= 7, numeric
// continuation otherwise.
SymmetricCAD optimal_cad(int k, double theta, const SolverOptions& opt = {});

// Seed from the zero set of q*: sample it, pick nonnegative weights by LP.
std::optional<SymmetricCAD> lp_zero_curve_seed(int k, double theta, int lines = 200);

// ---- independent bounds ----

struct LowerBoundResult {
    bool feasible = false;
    double value = 0.0;
};

// max wbar such that the invariant moment equations admit nonnegative
// weights on the grid_n x grid_n lattice of [0,1]^2.
LowerBoundResult lower_bound_lp(const SpaceId& space, double theta, int grid_n);
// 1D analogue: max min(w-, w+) with nonnegative weights on grid_n points of [-1,1].
LowerBoundResult lower_bound_lp_1d(int k, int grid_n);

// min of phi(q^2) over q* and `trials` random q in the half space.
double upper_bound_sampling(const SpaceId& space, double theta, int trials, std::uint64_t seed = 20240611);

}  // namespace ocad
