#include "ocad/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "ocad/constructors.hpp"
#include "ocad/errors.hpp"
#include "ocad/simplex.hpp"

namespace ocad {

SpaceId half_space_of(const SpaceId& space) {
    return {space.family, space.degree / 2};
}

MomentMatrices moment_matrices(const SpaceId& space, MomentBasis basis) {
    if (space.degree < 1) throw std::invalid_argument("moment_matrices: k must be >= 1");
    MomentMatrices mm;
    mm.half_space = half_space_of(space);
    mm.basis = basis;
    const auto e = monomial_exponents(mm.half_space);
    const int D = static_cast<int>(e.size());
    mm.M_Omega = Eigen::MatrixXd::Zero(D, D);
    mm.M_x = Eigen::MatrixXd::Zero(D, D);
    mm.M_y = Eigen::MatrixXd::Zero(D, D);
    for (int a = 0; a < D; ++a) {
        for (int b = 0; b < D; ++b) {
            const int i1 = e[a].px, j1 = e[a].py, i2 = e[b].px, j2 = e[b].py;
            if (basis == MomentBasis::legendre) {
                mm.M_Omega(a, b) = a == b ? 1.0 : 0.0;
                if (j1 == j2 && (i1 + i2) % 2 == 0) mm.M_x(a, b) = std::sqrt((2.0 * i1 + 1.0) * (2.0 * i2 + 1.0));
                if (i1 == i2 && (j1 + j2) % 2 == 0) mm.M_y(a, b) = std::sqrt((2.0 * j1 + 1.0) * (2.0 * j2 + 1.0));
            } else {
                mm.M_Omega(a, b) = moment_1d(i1 + i2) * moment_1d(j1 + j2);
                if ((i1 + i2) % 2 == 0) mm.M_x(a, b) = moment_1d(j1 + j2);
                if ((j1 + j2) % 2 == 0) mm.M_y(a, b) = moment_1d(i1 + i2);
            }
        }
    }
    return mm;
}

PhiStarResult phi_star_sq(const SpaceId& space, double theta) {
    if (!(theta >= -1.0 && theta <= 1.0)) throw std::invalid_argument("phi_star_sq: theta must lie in [-1,1]");
    const MomentMatrices mm = moment_matrices(space, MomentBasis::legendre);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mm.M_theta(theta));
    if (es.info() != Eigen::Success) throw NumericError("phi_star_sq: eigen-solver failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const int D = static_cast<int>(lam.size());
    const double lmax = lam(D - 1);
    if (!(lmax > 0.0)) throw NumericError("phi_star_sq: nonpositive largest eigenvalue");
    int mult = 0;
    for (int i = D - 1; i >= 0 && (lmax - lam(i)) <= 1e-8 * lmax; --i) ++mult;
    const Eigen::MatrixXd V = es.eigenvectors().rightCols(mult);

    // Representative: highest y-power Legendre coefficient.
    const auto e = monomial_exponents(mm.half_space);
    int h = 0;
    for (int i = 0; i < D; ++i) {
        if (e[i].px == 0 && e[i].py >= e[h].py) h = i;
    }
    Eigen::VectorXd v;
    if (mult == 1) {
        v = V.col(0);
    } else {
        v = V * V.row(h).transpose();
        if (v.norm() < 1e-12) v = V.col(0);
    }
    v.normalize();
    int s = h;
    if (std::abs(v(h)) <= 1e-12) v.cwiseAbs().maxCoeff(&s);
    if (v(s) < 0.0) v = -v;

    PhiStarResult r;
    r.value = 1.0 / lmax;
    r.eigen_multiplicity = mult;
    r.q_legendre.assign(v.data(), v.data() + D);
    r.q_star = from_legendre(mm.half_space, r.q_legendre);
    return r;
}

double phi_of(const Polynomial2D& p, double theta) {
    const double den = (1.0 + theta) * face_average_x(p) + (1.0 - theta) * face_average_y(p);
    if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
    return cell_average(p) / den;
}

bool check_criterion_2(const SymmetricCAD& cad, const Polynomial2D& p_star) {
    bool nonzero = false;
    const auto& e = p_star.exponents();
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (p_star.coeffs()[i] == 0.0) continue;
        nonzero = true;
        if (!cad.space.contains(e[i].px, e[i].py)) return false;
    }
    if (!nonzero) return false;
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            if (p_star(-1.0 + 0.02 * i, -1.0 + 0.02 * j) < -1e-10) return false;
        }
    }
    for (const auto& n : expand(cad).internal) {
        if (std::abs(p_star(n.x, n.y)) > 1e-8) return false;
    }
    return true;
}

bool check_criterion_4(const SymmetricCAD& cad, double tol) {
    return std::abs(cad.boundary_weight - phi_star_sq(cad.space, cad.theta).value) <= tol;
}

// ---------------------------------------------------------------------------
// Nonlinear system: sum_s w_s g(x_s, y_s) = m_g over the gs-invariant basis
// and q*(x_s, y_s) = 0. Unknowns packed as [w..., x..., y...].

namespace {

struct System {
    std::vector<Monomial> basis;  // even monomials
    std::vector<double> rhs;      // internal moments m_g
    Polynomial2D q;
};

System make_system(const SpaceId& space, double theta, double wbar, const Polynomial2D& q) {
    System sys;
    for (const auto& m : monomial_exponents(space)) {
        if (m.px % 2 || m.py % 2) continue;
        sys.basis.push_back(m);
        const double face = (1.0 + theta) * moment_1d(m.py) + (1.0 - theta) * moment_1d(m.px);
        sys.rhs.push_back(moment_1d(m.px) * moment_1d(m.py) - wbar * face);
    }
    sys.q = q;
    return sys;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

Eigen::VectorXd residual(const System& sys, const Eigen::VectorXd& z) {
    const int S = static_cast<int>(z.size() / 3);
    const int G = static_cast<int>(sys.basis.size());
    Eigen::VectorXd F(G + S);
    for (int g = 0; g < G; ++g) {
        double v = -sys.rhs[g];
        for (int s = 0; s < S; ++s) v += z(s) * ipow(z(S + s), sys.basis[g].px) * ipow(z(2 * S + s), sys.basis[g].py);
        F(g) = v;
    }
    for (int s = 0; s < S; ++s) F(G + s) = sys.q(z(S + s), z(2 * S + s));
    return F;
}

Eigen::MatrixXd jacobian(const System& sys, const Eigen::VectorXd& z) {
    const int S = static_cast<int>(z.size() / 3);
    const int G = static_cast<int>(sys.basis.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(G + S, 3 * S);
    for (int g = 0; g < G; ++g) {
        const int a = sys.basis[g].px, b = sys.basis[g].py;
        for (int s = 0; s < S; ++s) {
            const double w = z(s), x = z(S + s), y = z(2 * S + s);
            J(g, s) = ipow(x, a) * ipow(y, b);
            if (a > 0) J(g, S + s) = w * a * ipow(x, a - 1) * ipow(y, b);
            if (b > 0) J(g, 2 * S + s) = w * b * ipow(x, a) * ipow(y, b - 1);
        }
    }
    for (int s = 0; s < S; ++s) {
        J(G + s, S + s) = sys.q.dx(z(S + s), z(2 * S + s));
        J(G + s, 2 * S + s) = sys.q.dy(z(S + s), z(2 * S + s));
    }
    return J;
}

void project(Eigen::VectorXd& z) {
    const int S = static_cast<int>(z.size() / 3);
    for (int i = S; i < 3 * S; ++i) z(i) = std::clamp(z(i), 0.0, 1.0);
}

Eigen::VectorXd pack(const std::vector<SymOrbit>& orbits) {
    const int S = static_cast<int>(orbits.size());
    Eigen::VectorXd z(3 * S);
    for (int s = 0; s < S; ++s) {
        z(s) = orbits[s].weight;
        z(S + s) = orbits[s].x;
        z(2 * S + s) = orbits[s].y;
    }
    return z;
}

std::vector<SymOrbit> unpack(const Eigen::VectorXd& z) {
    const int S = static_cast<int>(z.size() / 3);
    std::vector<SymOrbit> out(S);
    for (int s = 0; s < S; ++s) out[s] = {z(S + s), z(2 * S + s), z(s), OrbitKind::gs};
    return out;
}

struct NewtonOutcome {
    bool converged = false;
    Eigen::VectorXd z;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

NewtonOutcome newton(const System& sys, Eigen::VectorXd z, const SolverOptions& opt, double theta,
                     std::vector<ResidualRecord>* log) {
    NewtonOutcome out;
    project(z);
    Eigen::VectorXd F = residual(sys, z);
    double fnorm = F.norm();
    int polish = 0;
    for (int it = 0; it <= opt.max_iter; ++it) {
        const double rinf = F.lpNorm<Eigen::Infinity>();
        if (log) log->push_back({theta, it, rinf});
        out.iterations = it;
        if (rinf <= opt.residual_target) {
            out.converged = true;
            // A few extra steps usually buy another digit or two.
            if (++polish > 3 || rinf <= 1e-15) break;
        }
        if (it == opt.max_iter) break;
        const Eigen::MatrixXd J = jacobian(sys, z);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
        cod.setThreshold(1e-12);
        const Eigen::VectorXd step = cod.solve(-F);
        bool accepted = false;
        for (double alpha = 1.0; alpha >= 1.0 / 1024.0; alpha /= 2.0) {
            Eigen::VectorXd zn = z + alpha * step;
            project(zn);
            const Eigen::VectorXd Fn = residual(sys, zn);
            if (Fn.norm() < (1.0 - 1e-4 * alpha) * fnorm) {
                z = zn;
                F = Fn;
                fnorm = Fn.norm();
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Levenberg-Marquardt fallback.
            const Eigen::MatrixXd JtJ = J.transpose() * J;
            const Eigen::VectorXd g = J.transpose() * F;
            double mu = 1e-6 * std::max(1.0, JtJ.diagonal().maxCoeff());
            for (int tries = 0; tries < 10 && !accepted; ++tries, mu *= 10.0) {
                Eigen::MatrixXd A = JtJ;
                A.diagonal().array() += mu;
                Eigen::VectorXd zn = z - A.ldlt().solve(g);
                project(zn);
                const Eigen::VectorXd Fn = residual(sys, zn);
                if (Fn.norm() < fnorm) {
                    z = zn;
                    F = Fn;
                    fnorm = Fn.norm();
                    accepted = true;
                }
            }
        }
        if (!accepted) break;  // stagnated; keep the best point
    }
    out.z = z;
    out.residual = F.lpNorm<Eigen::Infinity>();
    out.converged = out.residual <= opt.residual_target;
    return out;
}

// Merge coincident orbits and drop zero-weight ones.
std::vector<SymOrbit> tidy(std::vector<SymOrbit> orbits, const SolverOptions& opt) {
    std::vector<SymOrbit> out;
    for (auto o : orbits) {
        if (std::abs(o.x) <= kAxisSnap) o.x = 0.0;
        if (std::abs(o.y) <= kAxisSnap) o.y = 0.0;
        bool merged = false;
        for (auto& p : out) {
            if (std::hypot(p.x - o.x, p.y - o.y) <= opt.merge_dist) {
                p.weight += o.weight;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(o);
    }
    std::erase_if(out, [&](const SymOrbit& o) { return std::abs(o.weight) <= opt.drop_weight; });
    return out;
}

struct StepResult {
    bool ok = false;
    std::vector<SymOrbit> orbits;
    double residual = 0.0;
    int iterations = 0;
    std::string why;
};

// Newton at one theta; orbits whose weight turns negative are removed from
// the warm start one at a time.
StepResult solve_at(const System& sys, std::vector<SymOrbit> warm, const SolverOptions& opt, double theta,
                    std::vector<ResidualRecord>* log) {
    StepResult r;
    while (!warm.empty()) {
        NewtonOutcome n = newton(sys, pack(warm), opt, theta, log);
        r.iterations += n.iterations;
        if (!n.converged) {
            r.why = "no convergence (residual " + std::to_string(n.residual) + ")";
            r.residual = n.residual;
            return r;
        }
        auto sol = unpack(n.z);
        int worst = -1;
        for (int s = 0; s < static_cast<int>(sol.size()); ++s) {
            if (sol[s].weight < -opt.drop_weight && (worst < 0 || sol[s].weight < sol[worst].weight)) worst = s;
        }
        if (worst >= 0) {
            warm.erase(warm.begin() + worst);
            continue;
        }
        auto cleaned = tidy(sol, opt);
        if (cleaned.size() != sol.size()) {
            NewtonOutcome m = newton(sys, pack(cleaned), opt, theta, log);
            r.iterations += m.iterations;
            if (!m.converged) {
                r.why = "no convergence after removing zero-weight orbits";
                r.residual = m.residual;
                return r;
            }
            cleaned = unpack(m.z);
            for (auto& o : cleaned) {
                if (o.weight <= 0.0) {
                    r.why = "infeasible stationary point";
                    r.residual = m.residual;
                    return r;
                }
            }
            n = m;
        }
        r.ok = true;
        r.orbits = cleaned;
        r.residual = n.residual;
        return r;
    }
    r.why = "all orbits removed";
    return r;
}

SymmetricCAD make_cad(int k, double theta, double wbar, std::vector<SymOrbit> orbits) {
    SymmetricCAD cad;
    cad.space = {Family::P, k};
    cad.theta = theta;
    cad.boundary_weight = wbar;
    for (auto& o : orbits) {
        if (std::abs(o.x) <= kAxisSnap) o.x = 0.0;
        if (std::abs(o.y) <= kAxisSnap) o.y = 0.0;
    }
    cad.orbits = std::move(orbits);
    cad.provenance = Provenance::numeric;
    return cad;
}

void check_even_k(int k) {
    if (k < 2 || k % 2) throw std::invalid_argument("numeric OCAD solver expects an even k >= 2, got " + std::to_string(k));
}

}  // namespace

double ocad_system_residual(const SymmetricCAD& cad, const Polynomial2D& q_star) {
    const System sys = make_system(cad.space, cad.theta, cad.boundary_weight, q_star);
    return residual(sys, pack(cad.orbits)).lpNorm<Eigen::Infinity>();
}

std::optional<SymmetricCAD> lp_zero_curve_seed(int k, double theta, int lines) {
    const SpaceId space{Family::P, k};
    const PhiStarResult ps = phi_star_sq(space, theta);
    const Polynomial2D& q = ps.q_star;
    const System sys = make_system(space, theta, ps.value, q);

    // Zero set of q* on horizontal and vertical lines, folded into [0,1]^2.
    std::vector<std::pair<double, double>> pts;
    auto add = [&](double x, double y) {
        x = std::abs(x);
        y = std::abs(y);
        for (const auto& p : pts) {
            if (std::abs(p.first - x) < 1e-9 && std::abs(p.second - y) < 1e-9) return;
        }
        pts.emplace_back(x, y);
    };
    const int samples = 400;
    for (int l = 0; l <= lines; ++l) {
        const double c = static_cast<double>(l) / lines;
        for (int dir = 0; dir < 2; ++dir) {
            auto f = [&](double t) { return dir == 0 ? q(t, c) : q(c, t); };
            double t0 = -1.0, f0 = f(t0);
            for (int i = 1; i <= samples; ++i) {
                const double t1 = -1.0 + 2.0 * i / samples;
                const double f1 = f(t1);
                if (f0 == 0.0) {
                    dir == 0 ? add(t0, c) : add(c, t0);
                } else if (f0 * f1 < 0.0) {
                    double a = t0, b = t1, fa = f0;
                    for (int it = 0; it < 60; ++it) {
                        const double m = 0.5 * (a + b);
                        const double fm = f(m);
                        if (fa * fm <= 0.0) {
                            b = m;
                        } else {
                            a = m;
                            fa = fm;
                        }
                    }
                    const double r = 0.5 * (a + b);
                    dir == 0 ? add(r, c) : add(c, r);
                }
                t0 = t1;
                f0 = f1;
            }
        }
    }
    if (pts.empty()) return std::nullopt;

    // min sum |A w - m| over w >= 0, via slack pairs.
    const int G = static_cast<int>(sys.basis.size());
    const int P = static_cast<int>(pts.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(G, P + 2 * G);
    Eigen::VectorXd b(G), c = Eigen::VectorXd::Zero(P + 2 * G);
    for (int g = 0; g < G; ++g) {
        for (int p = 0; p < P; ++p) A(g, p) = ipow(pts[p].first, sys.basis[g].px) * ipow(pts[p].second, sys.basis[g].py);
        A(g, P + g) = 1.0;
        A(g, P + G + g) = -1.0;
        b(g) = sys.rhs[g];
        c(P + g) = -1.0;
        c(P + G + g) = -1.0;
    }
    const LPResult lp = simplex_max(A, b, c);
    if (lp.status != LPStatus::optimal) return std::nullopt;

    // Cluster neighbouring support points into single orbits.
    std::vector<SymOrbit> orbits;
    for (int p = 0; p < P; ++p) {
        const double w = lp.x(p);
        if (w <= 1e-12) continue;
        bool merged = false;
        for (auto& o : orbits) {
            if (std::hypot(o.x - pts[p].first, o.y - pts[p].second) < 0.02) {
                const double tot = o.weight + w;
                o.x = (o.x * o.weight + pts[p].first * w) / tot;
                o.y = (o.y * o.weight + pts[p].second * w) / tot;
                o.weight = tot;
                merged = true;
                break;
            }
        }
        if (!merged) orbits.push_back({pts[p].first, pts[p].second, w, OrbitKind::gs});
    }
    if (orbits.empty()) return std::nullopt;
    return make_cad(k, theta, ps.value, orbits);
}

namespace {

struct Marcher {
    int k;
    SolverOptions opt;
    std::vector<ResidualRecord>* log;
    std::vector<ContinuationStep>* steps;
    bool used_lp = false;

    // Advance from (theta0, orbits) to theta1, bisecting on failure.
    std::vector<SymOrbit> advance(double theta0, const std::vector<SymOrbit>& orbits, double theta1, int depth,
                                  double& res_out, int& iters_out) {
        const SpaceId space{Family::P, k};
        const PhiStarResult ps = phi_star_sq(space, theta1);
        const System sys = make_system(space, theta1, ps.value, ps.q_star);
        StepResult r = solve_at(sys, orbits, opt, theta1, log);
        if (r.ok) {
            res_out = r.residual;
            iters_out = r.iterations;
            return r.orbits;
        }
        if (depth < opt.max_bisect) {
            const double mid = 0.5 * (theta0 + theta1);
            double rm;
            int im;
            const auto half = advance(theta0, orbits, mid, depth + 1, rm, im);
            if (steps) steps->push_back({mid, rm, im, static_cast<int>(half.size()), phi_star_sq(space, mid).value});
            return advance(mid, half, theta1, depth + 1, res_out, iters_out);
        }
        if (opt.allow_lp_reseed) {
            if (auto seed = lp_zero_curve_seed(k, theta1)) {
                StepResult s = solve_at(sys, seed->orbits, opt, theta1, log);
                if (s.ok) {
                    used_lp = true;
                    res_out = s.residual;
                    iters_out = s.iterations;
                    return s.orbits;
                }
            }
        }
        throw NumericError("OCAD continuation failed at theta=" + std::to_string(theta1) + " (reached " +
                           std::to_string(theta0) + "): " + r.why);
    }
};

}  // namespace

SolveReport solve_ocad_system(int k, double theta, const std::optional<SymmetricCAD>& warm_start,
                              const SolverOptions& opt, std::vector<ResidualRecord>* log) {
    check_even_k(k);
    if (!(theta >= -1.0 && theta <= 0.0)) throw std::invalid_argument("solve_ocad_system: theta must lie in [-1,0]");
    if (!warm_start && !opt.force_lp_seed) {
        ContinuationResult c = continuation_driver(k, theta, 0, opt, log);
        SolveReport rep;
        rep.cad = c.cad;
        rep.residual = c.steps.back().residual;
        rep.iterations = c.steps.back().iterations;
        rep.orbit_count = static_cast<int>(c.cad.orbits.size());
        return rep;
    }
    const SpaceId space{Family::P, k};
    const PhiStarResult ps = phi_star_sq(space, theta);
    const System sys = make_system(space, theta, ps.value, ps.q_star);
    SolveReport rep;
    std::vector<SymOrbit> start;
    if (warm_start) {
        for (const auto& o : warm_start->orbits) {
            if (o.kind == OrbitKind::gf && std::abs(o.x - o.y) > kAxisSnap) {
                start.push_back({o.x, o.y, o.weight / 2, OrbitKind::gs});
                start.push_back({o.y, o.x, o.weight / 2, OrbitKind::gs});
            } else {
                start.push_back({o.x, o.y, o.weight, OrbitKind::gs});
            }
        }
    } else {
        auto seed = lp_zero_curve_seed(k, theta);
        if (!seed) throw NumericError("solve_ocad_system: LP seed failed at theta=" + std::to_string(theta));
        start = seed->orbits;
        rep.used_lp_reseed = true;
    }
    StepResult r = solve_at(sys, start, opt, theta, log);
    if (!r.ok && opt.allow_lp_reseed && !rep.used_lp_reseed) {
        if (auto seed = lp_zero_curve_seed(k, theta)) {
            r = solve_at(sys, seed->orbits, opt, theta, log);
            rep.used_lp_reseed = true;
        }
    }
    if (!r.ok) {
        throw NumericError("solve_ocad_system failed at theta=" + std::to_string(theta) + ": " + r.why);
    }
    rep.cad = make_cad(k, theta, ps.value, r.orbits);
    rep.residual = r.residual;
    rep.iterations = r.iterations;
    rep.orbit_count = static_cast<int>(r.orbits.size());
    return rep;
}

ContinuationResult continuation_driver(int k, double theta_target, int steps, const SolverOptions& opt,
                                       std::vector<ResidualRecord>* log) {
    if (!(theta_target >= -1.0 && theta_target <= 1.0)) {
        throw std::invalid_argument("continuation_driver: theta must lie in [-1,1]");
    }
    if (k < 2) throw std::invalid_argument("continuation_driver: k must be >= 2");
    const int ke = k % 2 ? k - 1 : k;
    const double target = -std::abs(theta_target) + 0.0;  // no negative zero
    ContinuationResult out;

    const SymmetricCAD seed = ocad_pk_theta_pm1(ke, -1);
    std::vector<SymOrbit> orbits = seed.orbits;
    Marcher m{ke, opt, log, &out.steps};
    double res = 0.0;
    int iters = 0;
    orbits = m.advance(-1.0, orbits, -1.0, 0, res, iters);
    out.steps.push_back({-1.0, res, iters, static_cast<int>(orbits.size()), phi_star_sq({Family::P, ke}, -1.0).value});

    int n = steps;
    if (n <= 0) n = std::max(1, static_cast<int>(std::ceil((target + 1.0) / opt.dtheta - 1e-9)));
    double prev = -1.0;
    for (int j = 1; j <= n && target > -1.0; ++j) {
        const double th = j == n ? target : -1.0 + (target + 1.0) * j / n;
        orbits = m.advance(prev, orbits, th, 0, res, iters);
        out.steps.push_back({th, res, iters, static_cast<int>(orbits.size()), phi_star_sq({Family::P, ke}, th).value});
        prev = th;
    }
    std::stable_sort(out.steps.begin(), out.steps.end(),
                     [](const ContinuationStep& a, const ContinuationStep& b) { return a.theta < b.theta; });
    SymmetricCAD cad = make_cad(ke, target, phi_star_sq({Family::P, ke}, target).value, orbits);
    cad.space = {Family::P, k};
    out.cad = theta_target > 0.0 ? reflect_theta(cad) : cad;
    return out;
}

SymmetricCAD optimal_cad(int k, double theta, const SolverOptions& opt) {
    if (k <= 7) return ocad_pk(k, theta);
    return continuation_driver(k, theta, 0, opt).cad;
}

// ---------------------------------------------------------------------------

LowerBoundResult lower_bound_lp(const SpaceId& space, double theta, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("lower_bound_lp: grid_n must be >= 2");
    std::vector<Monomial> basis;
    for (const auto& m : monomial_exponents(space)) {
        if (m.px % 2 == 0 && m.py % 2 == 0) basis.push_back(m);
    }
    const int G = static_cast<int>(basis.size());
    const int N = grid_n * grid_n;
    Eigen::MatrixXd A(G, N + 1);
    Eigen::VectorXd b(G), c = Eigen::VectorXd::Zero(N + 1);
    c(0) = 1.0;
    std::vector<double> t(grid_n);
    for (int i = 0; i < grid_n; ++i) t[i] = static_cast<double>(i) / (grid_n - 1);
    for (int g = 0; g < G; ++g) {
        const int a = basis[g].px, bb = basis[g].py;
        A(g, 0) = (1.0 + theta) * moment_1d(bb) + (1.0 - theta) * moment_1d(a);
        for (int i = 0; i < grid_n; ++i) {
            const double xa = ipow(t[i], a);
            for (int j = 0; j < grid_n; ++j) A(g, 1 + i * grid_n + j) = xa * ipow(t[j], bb);
        }
        b(g) = moment_1d(a) * moment_1d(bb);
    }
    const LPResult lp = simplex_max(A, b, c);
    LowerBoundResult r;
    r.feasible = lp.status == LPStatus::optimal;
    r.value = r.feasible ? lp.objective : 0.0;
    return r;
}

LowerBoundResult lower_bound_lp_1d(int k, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("lower_bound_lp_1d: grid_n must be >= 2");
    // Columns: t, w-, w+, s1, s2, grid weights.
    const int rows = k + 1 + 2;
    const int cols = 5 + grid_n;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows), c = Eigen::VectorXd::Zero(cols);
    c(0) = 1.0;
    for (int m = 0; m <= k; ++m) {
        A(m, 1) = m % 2 ? -1.0 : 1.0;
        A(m, 2) = 1.0;
        for (int i = 0; i < grid_n; ++i) A(m, 5 + i) = ipow(-1.0 + 2.0 * i / (grid_n - 1), m);
        b(m) = moment_1d(m);
    }
    // t - w- + s1 = 0, t - w+ + s2 = 0
    A(k + 1, 0) = 1.0;
    A(k + 1, 1) = -1.0;
    A(k + 1, 3) = 1.0;
    A(k + 2, 0) = 1.0;
    A(k + 2, 2) = -1.0;
    A(k + 2, 4) = 1.0;
    const LPResult lp = simplex_max(A, b, c);
    LowerBoundResult r;
    r.feasible = lp.status == LPStatus::optimal;
    r.value = r.feasible ? lp.objective : 0.0;
    return r;
}

double upper_bound_sampling(const SpaceId& space, double theta, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("upper_bound_sampling: trials must be >= 1");
    const PhiStarResult ps = phi_star_sq(space, theta);
    double best = phi_of(multiply(ps.q_star, ps.q_star), theta);
    const SpaceId half = half_space_of(space);
    const int D = half.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> c(D);
    for (int t = 0; t < trials; ++t) {
        for (double& v : c) v = nd(rng);
        const Polynomial2D q = from_legendre(half, c);
        best = std::min(best, phi_of(multiply(q, q), theta));
    }
    return best;
}

}  // namespace ocad
