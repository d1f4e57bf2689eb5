#include "ocad/cad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ocad {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::classic: return "classic";
        case Provenance::optimal: return "optimal";
        case Provenance::quasi_optimal: return "quasi_optimal";
        case Provenance::numeric: return "numeric";
        case Provenance::user: return "user";
    }
    return "user";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "classic") return Provenance::classic;
    if (s == "optimal") return Provenance::optimal;
    if (s == "quasi_optimal") return Provenance::quasi_optimal;
    if (s == "numeric") return Provenance::numeric;
    if (s == "user") return Provenance::user;
    throw std::invalid_argument("unknown provenance '" + s + "'");
}

double SymmetricCAD::internal_weight() const {
    double s = 0.0;
    for (const auto& o : orbits) s += o.weight;
    return s;
}

double SymmetricCAD::apply(const Polynomial2D& p) const {
    double v = boundary_weight * ((1.0 + theta) * face_average_x(p) + (1.0 - theta) * face_average_y(p));
    for (const auto& o : orbits) v += o.weight * orbit_average(p, o);
    return v;
}

double GeneralCAD::apply(const Polynomial2D& p) const {
    double v = boundary[0] * face_average(p, Face::xm) + boundary[1] * face_average(p, Face::xp) +
               boundary[2] * face_average(p, Face::ym) + boundary[3] * face_average(p, Face::yp);
    for (const auto& n : internal) v += n.weight * p(n.x, n.y);
    return v;
}

double GeneralCAD::total_weight() const {
    double s = boundary[0] + boundary[1] + boundary[2] + boundary[3];
    for (const auto& n : internal) s += n.weight;
    return s;
}

namespace {

double snap(double v) {
    return std::abs(v) <= kAxisSnap ? 0.0 : v;
}

void expand_gs(double x, double y, double w, std::vector<Node2D>& out) {
    x = snap(x);
    y = snap(y);
    if (x == 0.0 && y == 0.0) {
        out.push_back({0.0, 0.0, w});
    } else if (x == 0.0) {
        out.push_back({0.0, -y, w / 2});
        out.push_back({0.0, y, w / 2});
    } else if (y == 0.0) {
        out.push_back({-x, 0.0, w / 2});
        out.push_back({x, 0.0, w / 2});
    } else {
        out.push_back({-x, -y, w / 4});
        out.push_back({x, -y, w / 4});
        out.push_back({-x, y, w / 4});
        out.push_back({x, y, w / 4});
    }
}

FeasibilityReport residual_report(const SpaceId& space, const std::function<double(const Monomial&)>& apply_fn) {
    FeasibilityReport r;
    const auto exps = monomial_exponents(space);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        const double exact = moment_1d(exps[i].px) * moment_1d(exps[i].py);
        const double res = std::abs(apply_fn(exps[i]) - exact);
        if (res > r.max_residual || r.worst_basis_index < 0) {
            r.max_residual = res;
            r.worst_basis_index = static_cast<int>(i);
        }
    }
    return r;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

GeneralCAD expand(const SymmetricCAD& cad) {
    GeneralCAD g;
    g.space = cad.space;
    const double w1 = cad.boundary_weight * (1.0 + cad.theta) / 2.0;
    const double w2 = cad.boundary_weight * (1.0 - cad.theta) / 2.0;
    g.boundary = {w1, w1, w2, w2};
    for (const auto& o : cad.orbits) {
        if (o.kind == OrbitKind::gs) {
            expand_gs(o.x, o.y, o.weight, g.internal);
        } else if (std::abs(o.x - o.y) <= kAxisSnap) {
            expand_gs(o.x, o.x, o.weight, g.internal);
        } else {
            expand_gs(o.x, o.y, o.weight / 2, g.internal);
            expand_gs(o.y, o.x, o.weight / 2, g.internal);
        }
    }
    return g;
}

FeasibilityReport verify_feasibility(const GeneralCAD& cad, double tol) {
    // Face means of a monomial are products of 1D moments, so evaluate the
    // decomposition per monomial directly.
    auto apply_fn = [&](const Monomial& m) {
        const double sx = m.px % 2 == 0 ? 1.0 : -1.0;
        const double sy = m.py % 2 == 0 ? 1.0 : -1.0;
        double v = (cad.boundary[0] * sx + cad.boundary[1]) * moment_1d(m.py) +
                   (cad.boundary[2] * sy + cad.boundary[3]) * moment_1d(m.px);
        for (const auto& n : cad.internal) v += n.weight * ipow(n.x, m.px) * ipow(n.y, m.py);
        return v;
    };
    FeasibilityReport r = residual_report(cad.space, apply_fn);
    for (double b : cad.boundary) r.weight_ok = r.weight_ok && b >= 0.0;
    for (const auto& n : cad.internal) {
        r.weight_ok = r.weight_ok && n.weight > 0.0;
        r.nodes_ok = r.nodes_ok && std::abs(n.x) <= 1.0 + kAxisSnap && std::abs(n.y) <= 1.0 + kAxisSnap;
    }
    r.feasible = r.max_residual <= tol && r.weight_ok && r.nodes_ok;
    return r;
}

FeasibilityReport verify_feasibility(const SymmetricCAD& cad, double tol) {
    FeasibilityReport r = verify_feasibility(expand(cad), tol);
    r.weight_ok = r.weight_ok && cad.boundary_weight > 0.0 && std::abs(cad.theta) <= 1.0;
    for (const auto& o : cad.orbits) {
        r.weight_ok = r.weight_ok && o.weight > 0.0;
        r.nodes_ok = r.nodes_ok && o.x >= -kAxisSnap && o.y >= -kAxisSnap && o.x <= 1.0 + kAxisSnap &&
                     o.y <= 1.0 + kAxisSnap;
    }
    r.feasible = r.max_residual <= tol && r.weight_ok && r.nodes_ok;
    return r;
}

FeasibilityReport verify_feasibility(const CAD1D& cad, double tol) {
    FeasibilityReport r;
    for (int m = 0; m <= cad.degree; ++m) {
        double v = cad.w_minus * (m % 2 == 0 ? 1.0 : -1.0) + cad.w_plus;
        for (const auto& n : cad.internal) v += n.weight * ipow(n.x, m);
        const double res = std::abs(v - moment_1d(m));
        if (res > r.max_residual || r.worst_basis_index < 0) {
            r.max_residual = res;
            r.worst_basis_index = m;
        }
    }
    r.weight_ok = cad.w_minus > 0.0 && cad.w_plus > 0.0;
    for (const auto& n : cad.internal) {
        r.weight_ok = r.weight_ok && n.weight > 0.0;
        r.nodes_ok = r.nodes_ok && std::abs(n.x) <= 1.0;
    }
    r.feasible = r.max_residual <= tol && r.weight_ok && r.nodes_ok;
    return r;
}

SymmetricCAD reflect_theta(const SymmetricCAD& cad) {
    SymmetricCAD out = cad;
    out.theta = -cad.theta;
    for (auto& o : out.orbits) std::swap(o.x, o.y);
    return out;
}

SymmetricCAD convex_combine(const SymmetricCAD& a, const SymmetricCAD& b, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("convex_combine: lambda must lie in [0,1]");
    }
    if (!(a.space == b.space)) {
        throw std::invalid_argument("convex_combine: spaces differ (" + a.space.name() + " vs " + b.space.name() + ")");
    }
    if (lambda == 1.0) return a;
    if (lambda == 0.0) return b;
    SymmetricCAD out;
    out.space = a.space;
    out.boundary_weight = lambda * a.boundary_weight + (1.0 - lambda) * b.boundary_weight;
    out.theta = out.boundary_weight > 0.0
                    ? (lambda * a.boundary_weight * a.theta + (1.0 - lambda) * b.boundary_weight * b.theta) /
                          out.boundary_weight
                    : 0.0;
    out.provenance = a.provenance == b.provenance ? a.provenance : Provenance::user;
    for (const auto& o : a.orbits) {
        SymOrbit s = o;
        s.weight *= lambda;
        if (s.weight > 0.0) out.orbits.push_back(s);
    }
    for (const auto& o : b.orbits) {
        SymOrbit s = o;
        s.weight *= 1.0 - lambda;
        if (s.weight > 0.0) out.orbits.push_back(s);
    }
    return out;
}

GeneralCAD convex_combine(const GeneralCAD& a, const GeneralCAD& b, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("convex_combine: lambda must lie in [0,1]");
    }
    if (!(a.space == b.space)) throw std::invalid_argument("convex_combine: spaces differ");
    if (lambda == 1.0) return a;
    if (lambda == 0.0) return b;
    GeneralCAD out;
    out.space = a.space;
    for (int i = 0; i < 4; ++i) out.boundary[i] = lambda * a.boundary[i] + (1.0 - lambda) * b.boundary[i];
    for (auto n : a.internal) {
        n.weight *= lambda;
        out.internal.push_back(n);
    }
    for (auto n : b.internal) {
        n.weight *= 1.0 - lambda;
        out.internal.push_back(n);
    }
    return out;
}

CellCAD to_physical(const GeneralCAD& cad, double dx, double dy, double cx, double cy) {
    if (!(dx > 0.0 && dy > 0.0)) throw std::invalid_argument("to_physical: cell sizes must be positive");
    CellCAD c;
    c.cx = cx;
    c.cy = cy;
    c.dx = dx;
    c.dy = dy;
    c.boundary = cad.boundary;
    c.nodes.reserve(cad.internal.size());
    for (const auto& n : cad.internal) c.nodes.push_back({cx + 0.5 * dx * n.x, cy + 0.5 * dy * n.y, n.weight});
    return c;
}

double bp_cfl_dt(const SymmetricCAD& cad, double a1, double a2, double dx, double dy, double c0) {
    if (a1 < 0.0 || a2 < 0.0) throw std::invalid_argument("bp_cfl_dt: wave speeds must be nonnegative");
    const double rate = a1 / dx + a2 / dy;
    if (rate == 0.0) return kUnboundedStep;
    return c0 * cad.boundary_weight / rate;
}

double bp_cfl_dt(const GeneralCAD& cad, double a1, double a2, double dx, double dy, double c0) {
    if (a1 < 0.0 || a2 < 0.0) throw std::invalid_argument("bp_cfl_dt: wave speeds must be nonnegative");
    double g = kUnboundedStep;
    if (a1 > 0.0) g = std::min({g, cad.boundary[0] * dx / a1, cad.boundary[1] * dx / a1});
    if (a2 > 0.0) g = std::min({g, cad.boundary[2] * dy / a2, cad.boundary[3] * dy / a2});
    return c0 * g;
}

double theta_of(double a1, double a2, double dx, double dy) {
    const double r1 = a1 / dx;
    const double r2 = a2 / dy;
    if (!(r1 + r2 > 0.0)) throw std::invalid_argument("theta_of: a1/dx + a2/dy must be positive");
    return (r1 - r2) / (r1 + r2);
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string to_json(const SymmetricCAD& cad) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"space\": {\"family\": \"" << (cad.space.family == Family::P ? "P" : "Q")
       << "\", \"degree\": " << cad.space.degree << "},\n";
    os << "  \"theta\": " << fmt17(cad.theta) << ",\n";
    os << "  \"boundary_weight\": " << fmt17(cad.boundary_weight) << ",\n";
    os << "  \"orbits\": [";
    for (std::size_t i = 0; i < cad.orbits.size(); ++i) {
        const auto& o = cad.orbits[i];
        os << (i ? ",\n    " : "\n    ") << "{\"x\": " << fmt17(o.x) << ", \"y\": " << fmt17(o.y)
           << ", \"weight\": " << fmt17(o.weight) << ", \"kind\": \"" << (o.kind == OrbitKind::gs ? "gs" : "gf")
           << "\"}";
    }
    os << (cad.orbits.empty() ? "],\n" : "\n  ],\n");
    os << "  \"provenance\": \"" << to_string(cad.provenance) << "\"\n";
    os << "}\n";
    return os.str();
}

SymmetricCAD symmetric_cad_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("CAD JSON parse error: ") + e.what());
    }
    try {
        SymmetricCAD cad;
        const auto& sp = j.at("space");
        const std::string fam = sp.at("family").get<std::string>();
        if (fam != "P" && fam != "Q") throw std::invalid_argument("space.family must be \"P\" or \"Q\"");
        cad.space = {fam == "P" ? Family::P : Family::Q, sp.at("degree").get<int>()};
        if (cad.space.degree < 0) throw std::invalid_argument("space.degree must be nonnegative");
        cad.theta = j.at("theta").get<double>();
        cad.boundary_weight = j.at("boundary_weight").get<double>();
        for (const auto& o : j.at("orbits")) {
            SymOrbit s;
            s.x = o.at("x").get<double>();
            s.y = o.at("y").get<double>();
            s.weight = o.at("weight").get<double>();
            const std::string kind = o.at("kind").get<std::string>();
            if (kind == "gs") {
                s.kind = OrbitKind::gs;
            } else if (kind == "gf") {
                s.kind = OrbitKind::gf;
            } else {
                throw std::invalid_argument("orbit kind must be \"gs\" or \"gf\"");
            }
            cad.orbits.push_back(s);
        }
        cad.provenance = provenance_from_string(j.value("provenance", std::string("user")));
        return cad;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("CAD JSON schema error: ") + e.what());
    }
}

void write_cad_file(const std::string& path, const SymmetricCAD& cad) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << to_json(cad);
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

SymmetricCAD read_cad_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return symmetric_cad_from_json(ss.str());
}

}  // namespace ocad
