#include "ocad/polyspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace ocad {

namespace {

constexpr int kMaxLegendre = 48;

struct LegendreTables {
    // a[n][m]: coefficient of x^m in L_n.  b[m][n] = <x^m L_n>.
    std::vector<std::vector<double>> a;
    std::vector<std::vector<double>> b;

    LegendreTables() {
        const int n_max = kMaxLegendre;
        std::vector<std::vector<double>> p(n_max + 1, std::vector<double>(n_max + 1, 0.0));
        p[0][0] = 1.0;
        if (n_max >= 1) p[1][1] = 1.0;
        for (int n = 1; n < n_max; ++n) {
            for (int m = 0; m <= n + 1; ++m) {
                double v = 0.0;
                if (m >= 1) v += (2.0 * n + 1.0) * p[n][m - 1];
                if (m <= n - 1) v -= n * p[n - 1][m];
                p[n + 1][m] = v / (n + 1.0);
            }
        }
        a = p;
        for (int n = 0; n <= n_max; ++n) {
            const double s = std::sqrt(2.0 * n + 1.0);
            for (double& v : a[n]) v *= s;
        }
        b.assign(n_max + 1, std::vector<double>(n_max + 1, 0.0));
        for (int m = 0; m <= n_max; ++m) {
            for (int n = 0; n <= m; ++n) {
                double s = 0.0;
                for (int t = 0; t <= n; ++t) s += a[n][t] * moment_1d(m + t);
                b[m][n] = s;
            }
        }
    }
};

const LegendreTables& tables() {
    static const LegendreTables t;
    return t;
}

void check_degree(int k) {
    if (k < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
}

std::vector<double> powers(double x, int n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i) out[i] = out[i - 1] * x;
    return out;
}

int max_axis_degree(const SpaceId& s) {
    return s.degree;
}

}  // namespace

int SpaceId::dim() const {
    check_degree(degree);
    if (family == Family::P) return (degree + 1) * (degree + 2) / 2;
    return (degree + 1) * (degree + 1);
}

bool SpaceId::contains(int px, int py) const {
    if (px < 0 || py < 0) return false;
    if (family == Family::P) return px + py <= degree;
    return px <= degree && py <= degree;
}

std::string SpaceId::name() const {
    return (family == Family::P ? "P" : "Q") + std::to_string(degree);
}

std::vector<Monomial> monomial_exponents(const SpaceId& space) {
    check_degree(space.degree);
    const int top = space.family == Family::P ? space.degree : 2 * space.degree;
    std::vector<Monomial> out;
    out.reserve(static_cast<std::size_t>(space.dim()));
    for (int d = 0; d <= top; ++d) {
        for (int px = d; px >= 0; --px) {
            const int py = d - px;
            if (space.contains(px, py)) out.push_back({px, py});
        }
    }
    return out;
}

int monomial_index(const SpaceId& space, int px, int py) {
    if (!space.contains(px, py)) return -1;
    const int d = px + py;
    if (space.family == Family::P) return d * (d + 1) / 2 + (d - px);
    const auto exps = monomial_exponents(space);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i].px == px && exps[i].py == py) return static_cast<int>(i);
    }
    return -1;
}

Polynomial2D::Polynomial2D(SpaceId space)
    : space_(space), exps_(monomial_exponents(space)), coeffs_(exps_.size(), 0.0) {}

Polynomial2D::Polynomial2D(SpaceId space, std::vector<double> coeffs)
    : space_(space), exps_(monomial_exponents(space)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != exps_.size()) {
        throw std::invalid_argument("coefficient count " + std::to_string(coeffs_.size()) +
                                    " does not match dim(" + space_.name() + ") = " +
                                    std::to_string(exps_.size()));
    }
}

Polynomial2D Polynomial2D::monomial(SpaceId space, int px, int py, double c) {
    Polynomial2D p(space);
    p.set_coeff(px, py, c);
    return p;
}

Polynomial2D Polynomial2D::constant(SpaceId space, double c) {
    return monomial(space, 0, 0, c);
}

double Polynomial2D::coeff(int px, int py) const {
    const int i = monomial_index(space_, px, py);
    return i < 0 ? 0.0 : coeffs_[static_cast<std::size_t>(i)];
}

void Polynomial2D::set_coeff(int px, int py, double v) {
    const int i = monomial_index(space_, px, py);
    if (i < 0) {
        throw std::out_of_range("monomial x^" + std::to_string(px) + " y^" + std::to_string(py) +
                                " is not in " + space_.name());
    }
    coeffs_[static_cast<std::size_t>(i)] = v;
}

double Polynomial2D::operator()(double x, double y) const {
    const int n = max_axis_degree(space_);
    const auto xp = powers(x, n);
    const auto yp = powers(y, n);
    double s = 0.0;
    for (std::size_t i = 0; i < exps_.size(); ++i) s += coeffs_[i] * xp[exps_[i].px] * yp[exps_[i].py];
    return s;
}

double Polynomial2D::dx(double x, double y) const {
    const int n = max_axis_degree(space_);
    const auto xp = powers(x, n);
    const auto yp = powers(y, n);
    double s = 0.0;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        const int px = exps_[i].px;
        if (px > 0) s += coeffs_[i] * px * xp[px - 1] * yp[exps_[i].py];
    }
    return s;
}

double Polynomial2D::dy(double x, double y) const {
    const int n = max_axis_degree(space_);
    const auto xp = powers(x, n);
    const auto yp = powers(y, n);
    double s = 0.0;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        const int py = exps_[i].py;
        if (py > 0) s += coeffs_[i] * py * xp[exps_[i].px] * yp[py - 1];
    }
    return s;
}

int Polynomial2D::total_degree() const {
    int d = -1;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (coeffs_[i] != 0.0) d = std::max(d, exps_[i].px + exps_[i].py);
    }
    return d;
}

Polynomial2D Polynomial2D::embed(const SpaceId& target) const {
    Polynomial2D out(target);
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (coeffs_[i] == 0.0) continue;
        out.set_coeff(exps_[i].px, exps_[i].py, coeffs_[i]);
    }
    return out;
}

Polynomial2D Polynomial2D::reflect_x() const {
    Polynomial2D out(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i].px % 2 == 1) out.coeffs_[i] = -out.coeffs_[i];
    }
    return out;
}

Polynomial2D Polynomial2D::reflect_y() const {
    Polynomial2D out(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i].py % 2 == 1) out.coeffs_[i] = -out.coeffs_[i];
    }
    return out;
}

Polynomial2D Polynomial2D::swap_xy() const {
    // Both families are symmetric under the swap, so the space is unchanged.
    Polynomial2D out(space_);
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        out.set_coeff(exps_[i].py, exps_[i].px, coeffs_[i]);
    }
    return out;
}

Polynomial2D& Polynomial2D::operator+=(const Polynomial2D& o) {
    if (!(o.space_ == space_)) {
        throw std::invalid_argument("cannot add " + o.space_.name() + " to " + space_.name());
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

Polynomial2D& Polynomial2D::operator-=(const Polynomial2D& o) {
    if (!(o.space_ == space_)) {
        throw std::invalid_argument("cannot subtract " + o.space_.name() + " from " + space_.name());
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

Polynomial2D& Polynomial2D::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

Polynomial2D multiply(const Polynomial2D& a, const Polynomial2D& b) {
    SpaceId out_space;
    if (a.space().family == b.space().family) {
        out_space = {a.space().family, a.space().degree + b.space().degree};
    } else {
        auto bound = [](const SpaceId& s) { return s.family == Family::P ? s.degree : 2 * s.degree; };
        out_space = {Family::P, bound(a.space()) + bound(b.space())};
    }
    Polynomial2D out(out_space);
    const auto& ea = a.exponents();
    const auto& eb = b.exponents();
    auto& c = out.coeffs();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (a.coeffs()[i] == 0.0) continue;
        for (std::size_t j = 0; j < eb.size(); ++j) {
            const int idx = monomial_index(out_space, ea[i].px + eb[j].px, ea[i].py + eb[j].py);
            c[static_cast<std::size_t>(idx)] += a.coeffs()[i] * b.coeffs()[j];
        }
    }
    return out;
}

std::vector<Polynomial2D> monomial_basis(const SpaceId& space) {
    std::vector<Polynomial2D> out;
    for (const auto& m : monomial_exponents(space)) out.push_back(Polynomial2D::monomial(space, m.px, m.py));
    return out;
}

std::vector<Polynomial2D> invariant_basis_gs(const SpaceId& space) {
    std::vector<Polynomial2D> out;
    for (const auto& m : monomial_exponents(space)) {
        if (m.px % 2 == 0 && m.py % 2 == 0) out.push_back(Polynomial2D::monomial(space, m.px, m.py));
    }
    return out;
}

std::vector<Polynomial2D> invariant_basis_gf(int k) {
    check_degree(k);
    const SpaceId sp{Family::P, k};
    std::vector<Polynomial2D> out;
    // Ordered by total degree 4a + 2b, then by a descending.
    for (int d = 0; d <= k; d += 2) {
        for (int a = d / 4; a >= 0; --a) {
            const int b = (d - 4 * a) / 2;
            if (4 * a + 2 * b != d) continue;
            Polynomial2D term = Polynomial2D::constant({Family::P, 0}, 1.0);
            const Polynomial2D x2y2 = Polynomial2D::monomial({Family::P, 4}, 2, 2);
            Polynomial2D r2({Family::P, 2});
            r2.set_coeff(2, 0, 1.0);
            r2.set_coeff(0, 2, 1.0);
            for (int i = 0; i < a; ++i) term = multiply(term, x2y2);
            for (int i = 0; i < b; ++i) term = multiply(term, r2);
            out.push_back(term.embed(sp));
        }
    }
    return out;
}

double moment_1d(int n) {
    if (n < 0) throw std::invalid_argument("negative moment order");
    return n % 2 == 0 ? 1.0 / (n + 1.0) : 0.0;
}

double cell_average(const Polynomial2D& p) {
    double s = 0.0;
    const auto& e = p.exponents();
    for (std::size_t i = 0; i < e.size(); ++i) s += p.coeffs()[i] * moment_1d(e[i].px) * moment_1d(e[i].py);
    return s;
}

double face_average(const Polynomial2D& p, Face face) {
    double s = 0.0;
    const auto& e = p.exponents();
    for (std::size_t i = 0; i < e.size(); ++i) {
        double v = 0.0;
        switch (face) {
            case Face::xm: v = (e[i].px % 2 == 0 ? 1.0 : -1.0) * moment_1d(e[i].py); break;
            case Face::xp: v = moment_1d(e[i].py); break;
            case Face::ym: v = (e[i].py % 2 == 0 ? 1.0 : -1.0) * moment_1d(e[i].px); break;
            case Face::yp: v = moment_1d(e[i].px); break;
        }
        s += p.coeffs()[i] * v;
    }
    return s;
}

double face_average_x(const Polynomial2D& p) {
    double s = 0.0;
    const auto& e = p.exponents();
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i].px % 2 == 0) s += p.coeffs()[i] * moment_1d(e[i].py);
    }
    return s;
}

double face_average_y(const Polynomial2D& p) {
    double s = 0.0;
    const auto& e = p.exponents();
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i].py % 2 == 0) s += p.coeffs()[i] * moment_1d(e[i].px);
    }
    return s;
}

double orbit_average(const Polynomial2D& p, const SymOrbit& orbit) {
    const double x = orbit.x;
    const double y = orbit.y;
    double s = p(x, y) + p(-x, y) + p(x, -y) + p(-x, -y);
    if (orbit.kind == OrbitKind::gs) return s / 4.0;
    s += p(y, x) + p(-y, x) + p(y, -x) + p(-y, -x);
    return s / 8.0;
}

double legendre(int n, double x) {
    if (n < 0) throw std::invalid_argument("negative Legendre index");
    double p0 = 1.0;
    if (n == 0) return 1.0;
    double p1 = x;
    for (int m = 1; m < n; ++m) {
        const double p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return std::sqrt(2.0 * n + 1.0) * p1;
}

double legendre_deriv(int n, double x) {
    if (n < 0) throw std::invalid_argument("negative Legendre index");
    if (n == 0) return 0.0;
    // P'_{m+1} = P'_{m-1} + (2m+1) P_m
    double p0 = 1.0, p1 = x;
    double d0 = 0.0, d1 = 1.0;
    for (int m = 1; m < n; ++m) {
        const double p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
        const double d2 = d0 + (2.0 * m + 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    return std::sqrt(2.0 * n + 1.0) * d1;
}

void legendre_all(int n, double x, double* val, double* der) {
    double p0 = 1.0, p1 = x, d0 = 0.0, d1 = 1.0;
    val[0] = 1.0;
    if (der) der[0] = 0.0;
    if (n >= 1) {
        val[1] = std::sqrt(3.0) * x;
        if (der) der[1] = std::sqrt(3.0);
    }
    for (int m = 1; m < n; ++m) {
        const double p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
        const double d2 = d0 + (2.0 * m + 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        const double s = std::sqrt(2.0 * m + 3.0);
        val[m + 1] = s * p2;
        if (der) der[m + 1] = s * d2;
    }
}

std::vector<double> to_legendre(const Polynomial2D& p) {
    const auto& t = tables();
    const auto& e = p.exponents();
    if (max_axis_degree(p.space()) > kMaxLegendre) throw std::invalid_argument("degree too large for Legendre tables");
    std::vector<double> out(e.size(), 0.0);
    for (std::size_t o = 0; o < e.size(); ++o) {
        const int a = e[o].px, b = e[o].py;
        double s = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            const int px = e[i].px, py = e[i].py;
            if (px < a || py < b) continue;
            s += p.coeffs()[i] * t.b[px][a] * t.b[py][b];
        }
        out[o] = s;
    }
    return out;
}

Polynomial2D from_legendre(const SpaceId& space, const std::vector<double>& coeffs) {
    const auto& t = tables();
    Polynomial2D out(space);
    const auto& e = out.exponents();
    if (coeffs.size() != e.size()) throw std::invalid_argument("Legendre coefficient count mismatch");
    if (max_axis_degree(space) > kMaxLegendre) throw std::invalid_argument("degree too large for Legendre tables");
    for (std::size_t o = 0; o < e.size(); ++o) {
        const int px = e[o].px, py = e[o].py;
        double s = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            const int a = e[i].px, b = e[i].py;
            if (a < px || b < py) continue;
            s += coeffs[i] * t.a[a][px] * t.a[b][py];
        }
        out.coeffs()[o] = s;
    }
    return out;
}

}  // namespace ocad
