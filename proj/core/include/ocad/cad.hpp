#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "ocad/polyspace.hpp"

namespace ocad {

enum class Provenance { classic, optimal, quasi_optimal, numeric, user };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

// Symmetric form on the reference cell:
//   <p> = wbar [(1+theta) <p>^x + (1-theta) <p>^y] + sum_s w_s orbit_avg_s(p)
// with 2 wbar + sum_s w_s = 1.
struct SymmetricCAD {
    SpaceId space;
    double theta = 0.0;
    double boundary_weight = 0.0;
    std::vector<SymOrbit> orbits;
    Provenance provenance = Provenance::user;

    double internal_weight() const;  // sum of orbit weights
    // Value of the decomposition applied to p (without expanding).
    double apply(const Polynomial2D& p) const;
};

struct Node2D {
    double x = 0.0;
    double y = 0.0;
    double weight = 0.0;
};

// General form: boundary weights multiply the four face means.
struct GeneralCAD {
    SpaceId space;
    std::array<double, 4> boundary{};  // w1-, w1+, w2-, w2+
    std::vector<Node2D> internal;

    double apply(const Polynomial2D& p) const;
    double total_weight() const;
};

struct Node1D {
    double x = 0.0;
    double weight = 0.0;
};

struct CAD1D {
    int degree = 1;
    double w_minus = 0.0;
    double w_plus = 0.0;
    std::vector<Node1D> internal;
};

// Orbit coordinates closer to an axis than this are snapped onto it when
// expanding, so that degenerate orbits produce merged nodes.
inline constexpr double kAxisSnap = 1e-14;
inline constexpr double kDefaultFeasTol = 1e-10;

GeneralCAD expand(const SymmetricCAD& cad);

struct FeasibilityReport {
    double max_residual = 0.0;
    int worst_basis_index = -1;
    bool weight_ok = true;
    bool nodes_ok = true;
    bool feasible = false;
};

// Exactness over the full monomial basis of the CAD's space. Symmetric CADs
// are checked through their expansion.
FeasibilityReport verify_feasibility(const GeneralCAD& cad, double tol = kDefaultFeasTol);
FeasibilityReport verify_feasibility(const SymmetricCAD& cad, double tol = kDefaultFeasTol);
FeasibilityReport verify_feasibility(const CAD1D& cad, double tol = kDefaultFeasTol);

// CAD for -theta: swap every orbit (x, y) -> (y, x).
SymmetricCAD reflect_theta(const SymmetricCAD& cad);

// lambda * a + (1 - lambda) * b. Symmetric operands may carry different
// theta; the result carries the weighted theta that keeps the face weights
// linear. Orbits with zero scaled weight are dropped.
SymmetricCAD convex_combine(const SymmetricCAD& a, const SymmetricCAD& b, double lambda);
GeneralCAD convex_combine(const GeneralCAD& a, const GeneralCAD& b, double lambda);

// A CAD mapped onto the physical cell [cx-dx/2, cx+dx/2] x [cy-dy/2, cy+dy/2].
struct CellCAD {
    double cx = 0.0, cy = 0.0, dx = 1.0, dy = 1.0;
    std::array<double, 4> boundary{};
    std::vector<Node2D> nodes;  // physical coordinates, reference weights
};
CellCAD to_physical(const GeneralCAD& cad, double dx, double dy, double cx, double cy);

inline constexpr double kUnboundedStep = std::numeric_limits<double>::infinity();

// c0 * wbar / (a1/dx + a2/dy); kUnboundedStep when both speeds vanish.
double bp_cfl_dt(const SymmetricCAD& cad, double a1, double a2, double dx, double dy, double c0);
// c0 * min over faces of w * h / a, skipping directions with zero speed.
double bp_cfl_dt(const GeneralCAD& cad, double a1, double a2, double dx, double dy, double c0);

double theta_of(double a1, double a2, double dx, double dy);

// JSON interchange, floats written with 17 significant digits.
std::string to_json(const SymmetricCAD& cad);
SymmetricCAD symmetric_cad_from_json(const std::string& text);
void write_cad_file(const std::string& path, const SymmetricCAD& cad);
SymmetricCAD read_cad_file(const std::string& path);

}  // namespace ocad
