#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ocad {

enum class Family { P, Q };

// Polynomial space on the reference cell [-1,1]^2. P^k bounds the total
// degree, Q^k bounds the degree in each variable.
struct SpaceId {
    Family family = Family::P;
    int degree = 0;

    int dim() const;
    bool contains(int px, int py) const;
    std::string name() const;  // "P4", "Q2", ...

    friend bool operator==(const SpaceId&, const SpaceId&) = default;
};

struct Monomial {
    int px = 0;
    int py = 0;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Graded order: total degree ascending, then x-power descending.
// P^2 -> 1, x, y, x^2, xy, y^2. Every coefficient vector and every JSON
// file depends on this order.
std::vector<Monomial> monomial_exponents(const SpaceId& space);

// Position of x^px y^py in monomial_exponents(space), or -1.
int monomial_index(const SpaceId& space, int px, int py);

class Polynomial2D {
public:
    Polynomial2D() = default;
    explicit Polynomial2D(SpaceId space);
    Polynomial2D(SpaceId space, std::vector<double> coeffs);

    static Polynomial2D monomial(SpaceId space, int px, int py, double c = 1.0);
    static Polynomial2D constant(SpaceId space, double c);

    const SpaceId& space() const { return space_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }
    const std::vector<Monomial>& exponents() const { return exps_; }

    double coeff(int px, int py) const;
    void set_coeff(int px, int py, double v);

    // Fixed summation order (the graded order).
    double operator()(double x, double y) const;
    double dx(double x, double y) const;
    double dy(double x, double y) const;

    // Largest total degree carrying a nonzero coefficient; -1 for zero.
    int total_degree() const;

    // Re-express in a larger space. Throws if a nonzero term does not fit.
    Polynomial2D embed(const SpaceId& target) const;

    // g o p for the generators of the symmetry groups.
    Polynomial2D reflect_x() const;  // p(-x, y)
    Polynomial2D reflect_y() const;  // p(x, -y)
    Polynomial2D swap_xy() const;    // p(y, x)

    Polynomial2D& operator+=(const Polynomial2D& o);
    Polynomial2D& operator-=(const Polynomial2D& o);
    Polynomial2D& operator*=(double s);

    friend Polynomial2D operator+(Polynomial2D a, const Polynomial2D& b) { return a += b; }
    friend Polynomial2D operator-(Polynomial2D a, const Polynomial2D& b) { return a -= b; }
    friend Polynomial2D operator*(Polynomial2D a, double s) { return a *= s; }
    friend Polynomial2D operator*(double s, Polynomial2D a) { return a *= s; }

private:
    SpaceId space_{};
    std::vector<Monomial> exps_;
    std::vector<double> coeffs_;
};

// Product lands in P^{a+b} (or Q^{a+b}); mixing families promotes to P of
// the combined total degree bound.
Polynomial2D multiply(const Polynomial2D& a, const Polynomial2D& b);

std::vector<Polynomial2D> monomial_basis(const SpaceId& space);

// Even monomials x^{2i} y^{2j} admitted by the space.
std::vector<Polynomial2D> invariant_basis_gs(const SpaceId& space);

// (x^2 y^2)^a (x^2 + y^2)^b with 4a + 2b <= k, as members of P^k.
std::vector<Polynomial2D> invariant_basis_gf(int k);

// Normalized moments on [-1,1]: mean of x^n.
double moment_1d(int n);

// Means over the cell and over its faces (cell measure 4, face measure 2).
double cell_average(const Polynomial2D& p);
double face_average_x(const Polynomial2D& p);  // (<p>^{-x} + <p>^{+x}) / 2
double face_average_y(const Polynomial2D& p);  // (<p>^{-y} + <p>^{+y}) / 2

enum class Face { xm, xp, ym, yp };
double face_average(const Polynomial2D& p, Face face);

enum class OrbitKind { gs, gf };

// Representative node of a symmetry orbit in the closed quadrant [0,1]^2.
// weight is the total weight carried by the whole orbit.
struct SymOrbit {
    double x = 0.0;
    double y = 0.0;
    double weight = 0.0;
    OrbitKind kind = OrbitKind::gs;
};

// Mean of p over the four reflections of (x, y); gf orbits also average
// over the swapped point.
double orbit_average(const Polynomial2D& p, const SymOrbit& orbit);

// Orthonormal Legendre polynomials for the mean measure on [-1,1]:
// <L_m L_n> = delta_mn, L_n(1) = sqrt(2n+1).
double legendre(int n, double x);
double legendre_deriv(int n, double x);
// Values L_0..L_n(x) and derivatives into caller-provided buffers.
void legendre_all(int n, double x, double* val, double* der);

// Coefficients over tensor products L_i(x) L_j(y), indexed by the same graded
// order as the monomial coefficients. The index set is closed under the
// change of basis for both families.
std::vector<double> to_legendre(const Polynomial2D& p);
Polynomial2D from_legendre(const SpaceId& space, const std::vector<double>& coeffs);

}  // namespace ocad
