#pragma once

#include <vector>

#include "ocad/cad.hpp"
#include "ocad/polyspace.hpp"

namespace ocad {

// Gauss-Lobatto CAD in 1D, which is also the 1D optimum.
CAD1D classic_1d(int k);

// prod over interior nodes of (x - x_l)^2, ascending monomial coefficients.
// Vanishes at every interior node and equals a positive value at +-1.
std::vector<double> certificate_1d(int k, const CAD1D& cad);
double eval_poly1d(const std::vector<double>& c, double x);

// Tensor Lobatto-interior x Gauss CAD, weights split (1+-theta)/2 between
// the two orientations. Q <= 0 selects ceil((k+1)/2).
SymmetricCAD classic_2d(const SpaceId& space, double theta, int Q = 0);

struct CertifiedCAD {
    SymmetricCAD cad;
    Polynomial2D p_star;  // nonnegative, vanishes at every internal node
};

// Q^k: the classic CAD is optimal for every theta.
CertifiedCAD ocad_qk(int k, double theta);

// P^k at theta = -1 (sign < 0) or +1 (sign > 0).
SymmetricCAD ocad_pk_theta_pm1(int k, int sign);
// prod (y - y_l) over interior Lobatto nodes (x-version for sign > 0).
Polynomial2D q_star_theta_pm1(int k, int sign);

// Fully symmetric (gf orbit) OCADs at theta = 0 for 2 <= k <= 7.
SymmetricCAD ocad_pk_theta0(int k);

// General-theta closed forms. k selects the space within the pair.
SymmetricCAD ocad_p2p3(double theta, int k = 2);
SymmetricCAD ocad_p4p5(double theta, int k = 4);
SymmetricCAD ocad_p6p7(double theta, int k = 6);

// Closed-form boundary weights.
double wbar_p2p3(double theta);
double wbar_p4p5(double theta);
double wbar_p6p7(double theta);

// 12(1-t^2)w^3 + (26t^2-50)w^2 + 14w - 1.
double p4p5_cubic(double theta, double w);
// The two cubic factors whose smallest roots give the P^6 weight for
// theta <= 0 and theta >= 0 respectively.
double p6p7_cubic_neg(double theta, double w);
double p6p7_cubic_pos(double theta, double w);

// Dispatch to the closed-form P^k OCAD, 1 <= k <= 7.
SymmetricCAD ocad_pk(int k, double theta);

// Critical positive polynomial for ocad_pk(k, theta). For the general-theta
// P^6/P^7 family it is y^2 c(x,y)^2 with c the even conic through the two
// off-axis nodes (x and y swapped for theta > 0).
Polynomial2D analytic_certificate(int k, double theta);

// Convex combination of the theta = -1 and theta = 0 OCADs, reflected for
// theta > 0. The first form needs k <= 7; for larger k pass the theta = 0
// OCAD (e.g. from the optimizer).
SymmetricCAD quasi_optimal(int k, double theta);
SymmetricCAD quasi_optimal(int k, double theta, const SymmetricCAD& ocad_theta0);
double quasi_optimal_wbar(double wbar0, double w_gl, double theta);

}  // namespace ocad
