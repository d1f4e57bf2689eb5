#include "ocad/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ocad/errors.hpp"
#include "ocad/quadrature.hpp"

namespace ocad {

namespace {

constexpr double kRadicandFloor = -1e-13;

double safe_sqrt(double v, const char* where) {
    if (v < 0.0) {
        if (v >= kRadicandFloor) return 0.0;
        throw NumericError(std::string(where) + ": negative radicand " + std::to_string(v));
    }
    return std::sqrt(v);
}

// [a + (2/3) sqrt(r) cos(acos(s / r^1.5) / 3)]^-1
double trig_root(double a, double r, double s) {
    const double arg = std::clamp(s / std::pow(r, 1.5), -1.0, 1.0);
    return 1.0 / (a + 2.0 / 3.0 * std::sqrt(r) * std::cos(std::acos(arg) / 3.0));
}

void check_theta(double theta) {
    if (!(theta >= -1.0 && theta <= 1.0)) {
        throw std::invalid_argument("theta must lie in [-1,1], got " + std::to_string(theta));
    }
}

void check_pair(int k, int lo, const char* name) {
    if (k != lo && k != lo + 1) {
        throw std::invalid_argument(std::string(name) + ": k must be " + std::to_string(lo) + " or " +
                                    std::to_string(lo + 1));
    }
}

// Orbit weight for a tensor point with the given per-point weight.
double orbit_multiplicity(double x, double y) {
    return (x > 0.0 ? 2.0 : 1.0) * (y > 0.0 ? 2.0 : 1.0);
}

// theta = -1 tensor form: Gauss in x, interior Lobatto in y.
SymmetricCAD tensor_theta_m1(const SpaceId& space, int Q) {
    const int k = space.degree;
    const int L = lobatto_L_for_degree(k);
    const QuadRule1D gl = gauss_lobatto(L);
    const QuadRule1D g = gauss(Q);
    SymmetricCAD cad;
    cad.space = space;
    cad.theta = -1.0;
    cad.boundary_weight = gl.weights.front();
    for (std::size_t q = 0; q < g.size(); ++q) {
        const double x = g.nodes[q];
        if (x < 0.0) continue;
        for (int l = 1; l < L - 1; ++l) {
            const double y = gl.nodes[l];
            if (y < 0.0) continue;
            cad.orbits.push_back({x, y, orbit_multiplicity(x, y) * g.weights[q] * gl.weights[l], OrbitKind::gs});
        }
    }
    return cad;
}

Polynomial2D prod_linear_factors(const SpaceId& space, const std::vector<double>& roots, bool in_y) {
    Polynomial2D p = Polynomial2D::constant({Family::P, 0}, 1.0);
    for (double r : roots) {
        Polynomial2D f({Family::P, 1});
        f.set_coeff(0, 0, -r);
        if (in_y) {
            f.set_coeff(0, 1, 1.0);
        } else {
            f.set_coeff(1, 0, 1.0);
        }
        p = multiply(p, f);
    }
    return p.embed(space);
}

std::vector<double> interior_lobatto(int k) {
    const QuadRule1D gl = gauss_lobatto(lobatto_L_for_degree(k));
    return {gl.nodes.begin() + 1, gl.nodes.end() - 1};
}

SymmetricCAD finish(SymmetricCAD cad, double theta, Provenance prov) {
    cad.provenance = prov;
    return theta > 0.0 ? reflect_theta(cad) : cad;
}

}  // namespace

CAD1D classic_1d(int k) {
    const QuadRule1D gl = gauss_lobatto(lobatto_L_for_degree(k));
    CAD1D cad;
    cad.degree = k;
    cad.w_minus = gl.weights.front();
    cad.w_plus = gl.weights.back();
    for (std::size_t i = 1; i + 1 < gl.size(); ++i) cad.internal.push_back({gl.nodes[i], gl.weights[i]});
    return cad;
}

std::vector<double> certificate_1d(int k, const CAD1D& cad) {
    if (k < 1) throw std::invalid_argument("certificate_1d: k must be >= 1");
    std::vector<double> c{1.0};
    for (const auto& n : cad.internal) {
        for (int rep = 0; rep < 2; ++rep) {
            std::vector<double> next(c.size() + 1, 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i + 1] += c[i];
                next[i] -= n.x * c[i];
            }
            c = std::move(next);
        }
    }
    if (static_cast<int>(c.size()) - 1 > k) {
        throw std::invalid_argument("certificate_1d: CAD has too many interior nodes for degree " + std::to_string(k));
    }
    return c;
}

double eval_poly1d(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

SymmetricCAD classic_2d(const SpaceId& space, double theta, int Q) {
    check_theta(theta);
    if (space.degree < 1) throw std::invalid_argument("classic_2d: k must be >= 1");
    if (Q <= 0) Q = (space.degree + 2) / 2;
    if (2 * Q - 1 < space.degree) {
        throw std::invalid_argument("classic_2d: Q=" + std::to_string(Q) + " is not exact for degree " +
                                    std::to_string(space.degree));
    }
    const SymmetricCAD m1 = tensor_theta_m1(space, Q);
    SymmetricCAD out = convex_combine(m1, reflect_theta(m1), (1.0 - theta) / 2.0);
    out.theta = theta;
    out.provenance = Provenance::classic;
    return out;
}

CertifiedCAD ocad_qk(int k, double theta) {
    const SpaceId space{Family::Q, k};
    CertifiedCAD out;
    out.cad = classic_2d(space, theta);
    out.cad.provenance = Provenance::optimal;
    const auto r = interior_lobatto(k);
    const Polynomial2D qx = prod_linear_factors({Family::P, static_cast<int>(r.size())}, r, false);
    const Polynomial2D qy = prod_linear_factors({Family::P, static_cast<int>(r.size())}, r, true);
    const Polynomial2D q = multiply(qx, qy);
    out.p_star = multiply(q, q).embed(space);
    for (const auto& n : expand(out.cad).internal) {
        if (std::abs(out.p_star(n.x, n.y)) > 1e-12) {
            throw NumericError("ocad_qk: certificate does not vanish at an internal node");
        }
    }
    return out;
}

SymmetricCAD ocad_pk_theta_pm1(int k, int sign) {
    if (k < 1) throw std::invalid_argument("ocad_pk_theta_pm1: k must be >= 1");
    if (sign == 0) throw std::invalid_argument("ocad_pk_theta_pm1: sign must be +1 or -1");
    SymmetricCAD cad = tensor_theta_m1({Family::P, k}, (k + 2) / 2);
    return finish(cad, sign > 0 ? 1.0 : -1.0, Provenance::optimal);
}

Polynomial2D q_star_theta_pm1(int k, int sign) {
    const auto r = interior_lobatto(k);
    return prod_linear_factors({Family::P, k / 2}, r, sign < 0);
}

SymmetricCAD ocad_pk_theta0(int k) {
    if (k < 2 || k > 7) throw std::invalid_argument("ocad_pk_theta0: k must lie in 2..7");
    SymmetricCAD cad;
    cad.space = {Family::P, k};
    cad.theta = 0.0;
    cad.provenance = Provenance::optimal;
    const double s14 = std::sqrt(14.0);
    const double s30 = std::sqrt(30.0);
    if (k <= 3) {
        cad.boundary_weight = 0.25;
        cad.orbits.push_back({0.0, 0.0, 0.5, OrbitKind::gf});
    } else if (k <= 5) {
        cad.boundary_weight = 2.0 - s14 / 2.0;
        const double d = std::sqrt((7.0 - s14) / 15.0);
        const double a = std::sqrt((14.0 - 2.0 * s14) / 15.0);
        cad.orbits.push_back({d, d, (5.0 * s14 - 15.0) / 7.0, OrbitKind::gf});
        cad.orbits.push_back({a, 0.0, 2.0 * (s14 - 3.0) / 7.0, OrbitKind::gf});
    } else {
        cad.boundary_weight = 1.0 - s30 / 6.0;
        const double d = std::sqrt(3.0 / 5.0 - s30 / 25.0);
        const double a = std::sqrt(6.0 / 7.0 - 2.0 * s30 / 35.0);
        cad.orbits.push_back({d, d, (875.0 * s30 - 3125.0) / 4563.0, OrbitKind::gf});
        cad.orbits.push_back({a, 0.0, 2.0 * (343.0 * s30 - 1225.0) / 4563.0, OrbitKind::gf});
        cad.orbits.push_back({0.0, 0.0, (1012.0 - 40.0 * s30) / 4563.0, OrbitKind::gf});
    }
    return cad;
}

double wbar_p2p3(double theta) {
    check_theta(theta);
    return 1.0 / (4.0 + 2.0 * std::abs(theta));
}

double wbar_p4p5(double theta) {
    check_theta(theta);
    const double t2 = theta * theta;
    return trig_root(14.0 / 3.0, 78.0 * t2 + 46.0, 1476.0 * t2 - 244.0);
}

double wbar_p6p7(double theta) {
    check_theta(theta);
    const double a = std::abs(theta);
    const double t2 = theta * theta;
    return trig_root(2.0 * a + 20.0 / 3.0, 126.0 * t2 + 96.0 * a + 94.0,
                     864.0 * a * t2 + 2916.0 * t2 + 288.0 * a - 532.0);
}

double p4p5_cubic(double theta, double w) {
    const double t2 = theta * theta;
    return ((12.0 * (1.0 - t2) * w + (26.0 * t2 - 50.0)) * w + 14.0) * w - 1.0;
}

double p6p7_cubic_neg(double t, double w) {
    const double c3 = 12.0 * t * t * t - 48.0 * t * t - 12.0 * t + 48.0;
    const double c2 = 48.0 * t + 30.0 * t * t - 102.0;
    const double c1 = -6.0 * t + 20.0;
    return ((c3 * w + c2) * w + c1) * w - 1.0;
}

double p6p7_cubic_pos(double t, double w) {
    const double c3 = 12.0 * t * t * t + 48.0 * t * t - 12.0 * t - 48.0;
    const double c2 = 48.0 * t - 30.0 * t * t + 102.0;
    const double c1 = -6.0 * t - 20.0;
    return ((c3 * w + c2) * w + c1) * w + 1.0;
}

SymmetricCAD ocad_p2p3(double theta, int k) {
    check_pair(k, 2, "ocad_p2p3");
    const double a = std::abs(theta);
    SymmetricCAD cad;
    cad.space = {Family::P, k};
    cad.theta = -a;
    cad.boundary_weight = wbar_p2p3(theta);
    cad.orbits.push_back({std::sqrt(2.0 * a / (3.0 + 3.0 * a)), 0.0, (1.0 + a) / (2.0 + a), OrbitKind::gs});
    return finish(cad, theta, Provenance::optimal);
}

SymmetricCAD ocad_p4p5(double theta, int k) {
    check_pair(k, 4, "ocad_p4p5");
    const double a = std::abs(theta);
    const double w = wbar_p4p5(theta);
    const double res = p4p5_cubic(theta, w);
    if (std::abs(res) > 1e-12) {
        throw NumericError("ocad_p4p5: cubic residual " + std::to_string(res) + " exceeds 1e-12");
    }
    const double A = 1.0 - 4.0 * w + 2.0 * a * w;
    const double B = 1.0 - 6.0 * w + 4.0 * a * w;
    const double w1 = 5.0 * A * A / (9.0 * B);
    const double w2 = 1.0 - 2.0 * w - w1;
    const double x1 = safe_sqrt(3.0 * B / (5.0 * A), "ocad_p4p5 x1");
    const double y1 = safe_sqrt((1.0 - 6.0 * w) / (3.0 * A), "ocad_p4p5 y1");
    const double y2 = safe_sqrt((1.0 - 4.0 * w - 2.0 * a * w - 3.0 * w1 * y1 * y1) / (3.0 * w2), "ocad_p4p5 y2");
    SymmetricCAD cad;
    cad.space = {Family::P, k};
    cad.theta = -a;
    cad.boundary_weight = w;
    cad.orbits.push_back({x1, y1, w1, OrbitKind::gs});
    cad.orbits.push_back({0.0, y2, w2, OrbitKind::gs});
    return finish(cad, theta, Provenance::optimal);
}

SymmetricCAD ocad_p6p7(double theta, int k) {
    check_pair(k, 6, "ocad_p6p7");
    const double a = std::abs(theta);
    const double t = -a;
    const double w = wbar_p6p7(theta);
    const double res = p6p7_cubic_neg(t, w);
    if (std::abs(res) > 1e-10) {
        throw NumericError("ocad_p6p7: cubic residual " + std::to_string(res) + " exceeds 1e-10");
    }
    auto m = [&](int i, int j) {
        return 1.0 / ((i + 1.0) * (j + 1.0)) - w * ((1.0 + t) / (1.0 + j) + (1.0 - t) / (1.0 + i));
    };
    const double m02 = m(0, 2), m04 = m(0, 4), m06 = m(0, 6);
    const double m22 = m(2, 2), m42 = m(4, 2);
    const double beta1 = 1.0 - m22 * m22 / (m42 * m02) + (std::sqrt(30.0) + 2.0) / 36.0 * t * t;
    const double beta2 = m42 * m02 - m22 * m22;
    const double beta3 = m06 * m02 - m04 * m04;
    const double r12 = safe_sqrt((1.0 - beta1) * beta2 / beta1, "ocad_p6p7 node 1 x");
    const double r13 = safe_sqrt((1.0 - beta1) * beta3 / beta1, "ocad_p6p7 node 1 y");
    const double r22 = safe_sqrt(beta1 * beta2 / (1.0 - beta1), "ocad_p6p7 node 2 x");
    const double r23 = safe_sqrt(beta1 * beta3 / (1.0 - beta1), "ocad_p6p7 node 2 y");
    const double x1 = safe_sqrt((m22 - r12) / m02, "ocad_p6p7 x1");
    const double y1 = safe_sqrt((m04 + r13) / m02, "ocad_p6p7 y1");
    const double w1 = beta1 * m02 / (y1 * y1);
    const double x2 = safe_sqrt((m22 + r22) / m02, "ocad_p6p7 x2");
    const double y2 = safe_sqrt((m04 - r23) / m02, "ocad_p6p7 y2");
    const double w2 = (1.0 - beta1) * m02 / (y2 * y2);
    double mk[4];
    for (int i = 0; i < 4; ++i) {
        const int p = 2 * i;
        mk[i] = m(p, 0) - w1 * std::pow(x1, p) - w2 * std::pow(x2, p);
    }
    const double m0 = mk[0], m2 = mk[1], m4 = mk[2], m6 = mk[3];
    const double var = safe_sqrt(m4 * m0 - m2 * m2, "ocad_p6p7 axis spread");
    const double beta4 = (m6 * m0 * m0 - 3.0 * m4 * m2 * m0 + 2.0 * m2 * m2 * m2) / (var * var * var);
    const double s = beta4 / std::sqrt(beta4 * beta4 + 4.0);
    const double w3 = m0 / 2.0 * (1.0 + s);
    const double w4 = m0 / 2.0 * (1.0 - s);
    const double x3 = safe_sqrt(m2 / m0 - std::sqrt(w4 / w3) * var / m0, "ocad_p6p7 x3");
    const double x4 = safe_sqrt(m2 / m0 + std::sqrt(w3 / w4) * var / m0, "ocad_p6p7 x4");
    SymmetricCAD cad;
    cad.space = {Family::P, k};
    cad.theta = t;
    cad.boundary_weight = w;
    cad.orbits.push_back({x1, y1, w1, OrbitKind::gs});
    cad.orbits.push_back({x2, y2, w2, OrbitKind::gs});
    cad.orbits.push_back({x3, 0.0, w3, OrbitKind::gs});
    cad.orbits.push_back({x4, 0.0, w4, OrbitKind::gs});
    return finish(cad, theta, Provenance::optimal);
}

SymmetricCAD ocad_pk(int k, double theta) {
    check_theta(theta);
    if (k < 1 || k > 7) throw std::invalid_argument("ocad_pk: closed forms cover 1 <= k <= 7");
    if (k == 1) {
        SymmetricCAD cad = classic_2d({Family::P, 1}, theta);
        cad.provenance = Provenance::optimal;
        return cad;
    }
    if (std::abs(theta) == 1.0) return ocad_pk_theta_pm1(k, theta > 0.0 ? 1 : -1);
    if (theta == 0.0) return ocad_pk_theta0(k);
    if (k <= 3) return ocad_p2p3(theta, k);
    if (k <= 5) return ocad_p4p5(theta, k);
    return ocad_p6p7(theta, k);
}

Polynomial2D analytic_certificate(int k, double theta) {
    check_theta(theta);
    if (k < 1 || k > 7) throw std::invalid_argument("analytic_certificate: closed forms cover 1 <= k <= 7");
    const SpaceId space{Family::P, k};
    if (k == 1) return Polynomial2D::constant(space, 1.0);  // no internal nodes to vanish on
    if (std::abs(theta) == 1.0) {
        const Polynomial2D q = q_star_theta_pm1(k, theta > 0.0 ? 1 : -1);
        return multiply(q, q).embed(space);
    }
    const SpaceId p2{Family::P, 2};
    Polynomial2D q;
    Polynomial2D extra;
    if (theta == 0.0) {
        if (k <= 3) {
            Polynomial2D p(space);
            p.set_coeff(2, 0, 1.0);
            p.set_coeff(0, 2, 1.0);
            return p;
        }
        if (k <= 5) {
            q = Polynomial2D(p2);
            q.set_coeff(2, 0, 1.0);
            q.set_coeff(0, 2, 1.0);
            q.set_coeff(0, 0, -(14.0 - 2.0 * std::sqrt(14.0)) / 15.0);
            return multiply(q, q).embed(space);
        }
        // y (15x^2 + 35y^2 + 2 sqrt30 - 30) and its swap; the sum of squares is gf-invariant.
        const double c = 2.0 * std::sqrt(30.0) - 30.0;
        Polynomial2D c1(p2), c2(p2);
        c1.set_coeff(2, 0, 15.0);
        c1.set_coeff(0, 2, 35.0);
        c1.set_coeff(0, 0, c);
        c2.set_coeff(2, 0, 35.0);
        c2.set_coeff(0, 2, 15.0);
        c2.set_coeff(0, 0, c);
        const Polynomial2D q1 = multiply(Polynomial2D::monomial({Family::P, 1}, 0, 1), c1);
        const Polynomial2D q2 = multiply(Polynomial2D::monomial({Family::P, 1}, 1, 0), c2);
        return (multiply(q1, q1) + multiply(q2, q2)).embed(space);
    }
    const SymmetricCAD cad = ocad_pk(k, -std::abs(theta));
    if (k <= 3) {
        q = Polynomial2D::monomial({Family::P, 1}, 0, 1);
    } else if (k <= 5) {
        const double x1 = cad.orbits[0].x, y1 = cad.orbits[0].y, y2 = cad.orbits[1].y;
        q = Polynomial2D(p2);
        q.set_coeff(2, 0, y2 * y2 - y1 * y1);
        q.set_coeff(0, 2, x1 * x1);
        q.set_coeff(0, 0, -x1 * x1 * y2 * y2);
    } else {
        // Null vector of [1, x_s^2, y_s^2] for the two off-axis nodes.
        const double u1 = cad.orbits[0].x * cad.orbits[0].x, v1 = cad.orbits[0].y * cad.orbits[0].y;
        const double u2 = cad.orbits[1].x * cad.orbits[1].x, v2 = cad.orbits[1].y * cad.orbits[1].y;
        Polynomial2D conic(p2);
        conic.set_coeff(0, 0, u1 * v2 - v1 * u2);
        conic.set_coeff(2, 0, v1 - v2);
        conic.set_coeff(0, 2, u2 - u1);
        q = multiply(Polynomial2D::monomial({Family::P, 1}, 0, 1), conic);
    }
    Polynomial2D p = multiply(q, q).embed(space);
    return theta > 0.0 ? p.swap_xy() : p;
}

double quasi_optimal_wbar(double wbar0, double w_gl, double theta) {
    const double a = std::abs(theta);
    return wbar0 * w_gl / (wbar0 * a + w_gl * (1.0 - a));
}

SymmetricCAD quasi_optimal(int k, double theta) {
    if (k < 1 || k > 7) {
        throw std::invalid_argument("quasi_optimal: k=" + std::to_string(k) +
                                    " needs the theta=0 OCAD from the optimizer");
    }
    if (k == 1) {
        SymmetricCAD cad = classic_2d({Family::P, 1}, theta);
        cad.provenance = Provenance::quasi_optimal;
        return cad;
    }
    return quasi_optimal(k, theta, ocad_pk_theta0(k));
}

SymmetricCAD quasi_optimal(int k, double theta, const SymmetricCAD& ocad_theta0) {
    check_theta(theta);
    if (std::abs(ocad_theta0.theta) > 1e-14) throw std::invalid_argument("quasi_optimal: expected a theta=0 OCAD");
    const SpaceId space{Family::P, k};
    SymmetricCAD zero = ocad_theta0;
    zero.space = space;
    const SymmetricCAD m1 = ocad_pk_theta_pm1(k, -1);
    const double a = std::abs(theta);
    const double w0 = zero.boundary_weight;
    const double wgl = m1.boundary_weight;
    const double tau = w0 * a / (w0 * a + wgl * (1.0 - a));
    SymmetricCAD out = convex_combine(m1, zero, tau);
    out.theta = -a;
    out.boundary_weight = quasi_optimal_wbar(w0, wgl, theta);
    return finish(out, theta, Provenance::quasi_optimal);
}

}  // namespace ocad
