#include "ocad/dg_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <thread>

#include "ocad/constructors.hpp"
#include "ocad/errors.hpp"
#include "ocad/optimizer.hpp"
#include "ocad/quadrature.hpp"

namespace ocad::dg {

namespace {

// Contiguous chunks per worker, so each cell is written by exactly one thread.
template <class F>
void parallel_for(int n, F&& f) {
    const int T = std::min(worker_count(), std::max(1, n / 64));
    if (T <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex mu;
    for (int t = 0; t < T; ++t) {
        const int lo = static_cast<int>(static_cast<long>(n) * t / T);
        const int hi = static_cast<int>(static_cast<long>(n) * (t + 1) / T);
        pool.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

int worker_count() {
    if (const char* s = std::getenv("OCAD_THREADS")) {
        const int n = std::atoi(s);
        if (n >= 1) return n;
    }
    return 1;
}

Mesh2D::Mesh2D(int nx, int ny, double x0, double x1, double y0, double y1)
    : Nx(nx), Ny(ny), x_min(x0), x_max(x1), y_min(y0), y_max(y1) {
    if (nx < 1 || ny < 1 || !(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("Mesh2D: empty cells");
}

// ---------------------------------------------------------------------------
// Problems

void ProblemSpec::flux(const State& u, int dir, State& f) const {
    switch (kind) {
        case ProblemKind::advection:
            f[0] = (dir == 0 ? ax : ay) * u[0];
            return;
        case ProblemKind::burgers:
            f[0] = 0.5 * u[0] * u[0];
            return;
        case ProblemKind::euler: {
            const double rho = u[0];
            const double v = u[1 + dir] / rho;
            const double p = pressure(u);
            f[0] = u[1 + dir];
            f[1] = u[1] * v;
            f[2] = u[2] * v;
            f[1 + dir] += p;
            f[3] = (u[3] + p) * v;
            return;
        }
    }
}

double ProblemSpec::speed(const State& u, int dir) const {
    switch (kind) {
        case ProblemKind::advection:
            return std::abs(dir == 0 ? ax : ay);
        case ProblemKind::burgers:
            return std::abs(u[0]);
        case ProblemKind::euler: {
            const double v = u[1 + dir] / u[0];
            const double c = std::sqrt(std::max(0.0, gamma * pressure(u) / u[0]));
            return std::abs(v) + c;
        }
    }
    return 0.0;
}

double ProblemSpec::internal_energy(const State& u) const {
    return u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0];
}

double ProblemSpec::pressure(const State& u) const { return (gamma - 1.0) * internal_energy(u); }

bool ProblemSpec::admissible(const State& u) const {
    if (kind == ProblemKind::euler) return u[0] > 0.0 && internal_energy(u) > 0.0;
    return u[0] >= umin && u[0] <= umax;
}

ProblemSpec advection_problem(double ax, double ay) {
    ProblemSpec pb;
    pb.kind = ProblemKind::advection;
    pb.ax = ax;
    pb.ay = ay;
    pb.initial = [](double x, double y) { return State{std::sin(M_PI * (x + y)), 0, 0, 0}; };
    pb.exact = [ax, ay](double x, double y, double t) {
        return State{std::sin(M_PI * (x - ax * t + y - ay * t)), 0, 0, 0};
    };
    return pb;
}

ProblemSpec burgers_problem() {
    ProblemSpec pb;
    pb.kind = ProblemKind::burgers;
    pb.initial = [](double x, double y) { return State{std::sin(M_PI * (x + y)), 0, 0, 0}; };
    return pb;
}

namespace {

State primitive_to_conserved(double rho, double v1, double v2, double p, double gamma) {
    return {rho, rho * v1, rho * v2, 0.5 * rho * (v1 * v1 + v2 * v2) + p / (gamma - 1.0)};
}

}  // namespace

ProblemSpec shock_vortex_problem(double eps) {
    ProblemSpec pb;
    pb.kind = ProblemKind::euler;
    pb.m = 4;
    pb.gamma = 1.4;
    const double g = pb.gamma;
    const double M = 1.1;
    const double vl = M * std::sqrt(g);
    // Rankine-Hugoniot jump for a stationary normal shock.
    const double rr = (g + 1.0) * M * M / (2.0 + (g - 1.0) * M * M);
    const double pr = 1.0 + 2.0 * g / (g + 1.0) * (M * M - 1.0);
    const double vr = vl / rr;
    pb.inflow = primitive_to_conserved(1.0, vl, 0.0, 1.0, g);
    const State right = primitive_to_conserved(rr, vr, 0.0, pr, g);
    const double alpha = 0.204, rc = 0.4, xc = 0.25, yc = 0.5;
    pb.initial = [=](double x, double y) {
        if (x >= 0.5) return right;
        const double xb = x - xc, yb = y - yc;
        const double tau2 = (xb * xb + yb * yb) / (rc * rc);
        const double e = std::exp(alpha * (1.0 - tau2));
        const double dv1 = eps / rc * e * yb;
        const double dv2 = -eps / rc * e * xb;
        const double dT = -(g - 1.0) * eps * eps / (4.0 * alpha * g) * e * e;
        const double T = std::max(1.0 + dT, 0.0);
        const double rho = std::pow(T, 1.0 / (g - 1.0));
        return primitive_to_conserved(rho, vl + dv1, dv2, rho * T, g);
    };
    return pb;
}

Mesh2D shock_vortex_mesh(int Nx, int Ny) {
    Mesh2D mesh(Nx, Ny, 0.0, 2.0, 0.0, 1.0);
    mesh.bc = {Boundary::fixed_inflow, Boundary::outflow, Boundary::outflow, Boundary::outflow};
    return mesh;
}

// ---------------------------------------------------------------------------
// Basis and fields

Basis::Basis(int k_) : k(k_) {
    if (k < 0) throw std::invalid_argument("Basis: negative degree");
    for (int d = 0; d <= k; ++d) {
        for (int j = 0; j <= d; ++j) modes.push_back({d - j, j});
    }
    nb = static_cast<int>(modes.size());
    const QuadRule1D gv = gauss(k + 2), gf = gauss(k + 1);
    vq_nodes = gv.nodes;
    vq_weights = gv.weights;
    fq_nodes = gf.nodes;
    fq_weights = gf.weights;
    const int Qv = this->Qv(), Qf = this->Qf();
    vol_phi.resize(static_cast<std::size_t>(Qv) * Qv * nb);
    vol_dxi.resize(vol_phi.size());
    vol_deta.resize(vol_phi.size());
    for (int qx = 0; qx < Qv; ++qx) {
        for (int qy = 0; qy < Qv; ++qy) {
            for (int a = 0; a < nb; ++a) {
                const int i = modes[a][0], j = modes[a][1];
                const double xi = vq_nodes[qx], eta = vq_nodes[qy];
                const std::size_t idx = (static_cast<std::size_t>(qx) * Qv + qy) * nb + a;
                vol_phi[idx] = legendre(i, xi) * legendre(j, eta);
                vol_dxi[idx] = legendre_deriv(i, xi) * legendre(j, eta);
                vol_deta[idx] = legendre(i, xi) * legendre_deriv(j, eta);
            }
        }
    }
    face_phi.resize(static_cast<std::size_t>(4) * Qf * nb);
    for (int side = 0; side < 4; ++side) {
        for (int q = 0; q < Qf; ++q) {
            double xi, eta;
            if (side < 2) {
                xi = side == 0 ? -1.0 : 1.0;
                eta = fq_nodes[q];
            } else {
                xi = fq_nodes[q];
                eta = side == 2 ? -1.0 : 1.0;
            }
            for (int a = 0; a < nb; ++a) face_phi[(side * Qf + q) * nb + a] = eval_mode(a, xi, eta);
        }
    }
}

double Basis::eval_mode(int a, double xi, double eta) const {
    return legendre(modes[a][0], xi) * legendre(modes[a][1], eta);
}

DGField::DGField(const Mesh2D& mesh_, int k_, int m_) : mesh(mesh_), k(k_), m(m_), nb((k_ + 1) * (k_ + 2) / 2) {
    if (m < 1 || m > kMaxComponents) throw std::invalid_argument("DGField: bad component count");
    c.assign(static_cast<std::size_t>(mesh.cells()) * m * nb, 0.0);
}

State DGField::eval(int cell, double xi, double eta) const {
    double lx[64], ly[64];
    for (int i = 0; i <= k; ++i) {
        lx[i] = legendre(i, xi);
        ly[i] = legendre(i, eta);
    }
    State s{};
    for (int comp = 0; comp < m; ++comp) {
        const double* cc = coeffs(cell, comp);
        double v = 0.0;
        int a = 0;
        for (int d = 0; d <= k; ++d) {
            for (int j = 0; j <= d; ++j, ++a) v += cc[a] * lx[d - j] * ly[j];
        }
        s[comp] = v;
    }
    return s;
}

DGField l2_project(const std::function<State(double, double)>& ic, const Mesh2D& mesh, int k, int m) {
    DGField u(mesh, k, m);
    const Basis basis(k);
    const int Qv = basis.Qv();
    const double dx = mesh.dx(), dy = mesh.dy();
    parallel_for(mesh.cells(), [&](int cell) {
        const int i = cell % mesh.Nx, j = cell / mesh.Nx;
        for (int qx = 0; qx < Qv; ++qx) {
            for (int qy = 0; qy < Qv; ++qy) {
                const double w = basis.vq_weights[qx] * basis.vq_weights[qy];
                const State s = ic(mesh.xc(i) + 0.5 * dx * basis.vq_nodes[qx], mesh.yc(j) + 0.5 * dy * basis.vq_nodes[qy]);
                const double* phi = &basis.vol_phi[(static_cast<std::size_t>(qx) * Qv + qy) * basis.nb];
                for (int comp = 0; comp < m; ++comp) {
                    double* cc = u.coeffs(cell, comp);
                    for (int a = 0; a < basis.nb; ++a) cc[a] += w * s[comp] * phi[a];
                }
            }
        }
    });
    return u;
}

State lf_flux(const ProblemSpec& pb, const State& uL, const State& uR, int dir, double alpha) {
    State fL{}, fR{}, out{};
    pb.flux(uL, dir, fL);
    pb.flux(uR, dir, fR);
    for (int c = 0; c < pb.m; ++c) out[c] = 0.5 * (fL[c] + fR[c]) - 0.5 * alpha * (uR[c] - uL[c]);
    return out;
}

LimiterCAD make_limiter_cad(const SymmetricCAD& cad) {
    LimiterCAD lc;
    lc.cad = cad;
    const GeneralCAD g = expand(cad);
    lc.face_weight = g.boundary;
    lc.nodes = g.internal;
    lc.internal_weight = 1.0 - (g.boundary[0] + g.boundary[1] + g.boundary[2] + g.boundary[3]);
    return lc;
}

// ---------------------------------------------------------------------------
// Spatial operator

namespace {

// Face traces: [((cell*4 + side)*Qf + q)*m + comp].
std::vector<double> compute_traces(const DGField& u, const Basis& basis) {
    const int Qf = basis.Qf(), m = u.m, nb = u.nb;
    std::vector<double> T(static_cast<std::size_t>(u.mesh.cells()) * 4 * Qf * m);
    parallel_for(u.mesh.cells(), [&](int cell) {
        for (int comp = 0; comp < m; ++comp) {
            const double* cc = u.coeffs(cell, comp);
            for (int sq = 0; sq < 4 * Qf; ++sq) {
                const double* phi = &basis.face_phi[static_cast<std::size_t>(sq) * nb];
                double v = 0.0;
                for (int a = 0; a < nb; ++a) v += cc[a] * phi[a];
                T[(static_cast<std::size_t>(cell) * 4 * Qf + sq) * m + comp] = v;
            }
        }
    });
    return T;
}

State trace_at(const std::vector<double>& T, int cell, int side, int q, int Qf, int m) {
    State s{};
    const double* p = &T[((static_cast<std::size_t>(cell) * 4 + side) * Qf + q) * m];
    for (int c = 0; c < m; ++c) s[c] = p[c];
    return s;
}

std::array<double, 2> speeds_from_traces(const std::vector<double>& T, const DGField& u, const ProblemSpec& pb,
                                         int Qf) {
    const int n = u.mesh.cells() * 4 * Qf;
    std::array<double, 2> a{0.0, 0.0};
    if (pb.kind == ProblemKind::advection) return {std::abs(pb.ax), std::abs(pb.ay)};
    for (int idx = 0; idx < n; ++idx) {
        State s{};
        for (int c = 0; c < u.m; ++c) s[c] = T[static_cast<std::size_t>(idx) * u.m + c];
        a[0] = std::max(a[0], pb.speed(s, 0));
        a[1] = std::max(a[1], pb.speed(s, 1));
    }
    for (int side = 0; side < 4; ++side) {
        if (u.mesh.bc[side] == Boundary::fixed_inflow) {
            a[0] = std::max(a[0], pb.speed(pb.inflow, 0));
            a[1] = std::max(a[1], pb.speed(pb.inflow, 1));
        }
    }
    return a;
}

State ghost(const ProblemSpec& pb, Boundary b, const State& interior) {
    return b == Boundary::fixed_inflow ? pb.inflow : interior;
}

}  // namespace

std::array<double, 2> max_wave_speeds(const DGField& u, const ProblemSpec& pb, const Basis& basis) {
    return speeds_from_traces(compute_traces(u, basis), u, pb, basis.Qf());
}

void dg_rhs(const DGField& u, const ProblemSpec& pb, const Basis& basis, DGField& out) {
    const Mesh2D& mesh = u.mesh;
    const int Nx = mesh.Nx, Ny = mesh.Ny, Qf = basis.Qf(), Qv = basis.Qv(), m = u.m, nb = u.nb;
    if (out.c.size() != u.c.size()) out = DGField(mesh, u.k, m);
    const std::vector<double> T = compute_traces(u, basis);
    const std::array<double, 2> alpha = speeds_from_traces(T, u, pb, Qf);

    // Interface fluxes. FX: interface I between cells I-1 and I (I = 0..Nx).
    std::vector<State> FX(static_cast<std::size_t>(Nx + 1) * Ny * Qf), FY(static_cast<std::size_t>(Nx) * (Ny + 1) * Qf);
    const bool px = mesh.bc[0] == Boundary::periodic;
    const bool py = mesh.bc[2] == Boundary::periodic;
    parallel_for(Ny, [&](int j) {
        for (int I = 0; I <= Nx; ++I) {
            for (int q = 0; q < Qf; ++q) {
                State L, R;
                if (I > 0) {
                    L = trace_at(T, mesh.cell(I - 1, j), 1, q, Qf, m);
                } else if (px) {
                    L = trace_at(T, mesh.cell(Nx - 1, j), 1, q, Qf, m);
                } else {
                    L = ghost(pb, mesh.bc[0], trace_at(T, mesh.cell(0, j), 0, q, Qf, m));
                }
                if (I < Nx) {
                    R = trace_at(T, mesh.cell(I, j), 0, q, Qf, m);
                } else if (px) {
                    R = trace_at(T, mesh.cell(0, j), 0, q, Qf, m);
                } else {
                    R = ghost(pb, mesh.bc[1], trace_at(T, mesh.cell(Nx - 1, j), 1, q, Qf, m));
                }
                FX[(static_cast<std::size_t>(j) * (Nx + 1) + I) * Qf + q] = lf_flux(pb, L, R, 0, alpha[0]);
            }
        }
    });
    parallel_for(Nx, [&](int i) {
        for (int J = 0; J <= Ny; ++J) {
            for (int q = 0; q < Qf; ++q) {
                State B, Tp;
                if (J > 0) {
                    B = trace_at(T, mesh.cell(i, J - 1), 3, q, Qf, m);
                } else if (py) {
                    B = trace_at(T, mesh.cell(i, Ny - 1), 3, q, Qf, m);
                } else {
                    B = ghost(pb, mesh.bc[2], trace_at(T, mesh.cell(i, 0), 2, q, Qf, m));
                }
                if (J < Ny) {
                    Tp = trace_at(T, mesh.cell(i, J), 2, q, Qf, m);
                } else if (py) {
                    Tp = trace_at(T, mesh.cell(i, 0), 2, q, Qf, m);
                } else {
                    Tp = ghost(pb, mesh.bc[3], trace_at(T, mesh.cell(i, Ny - 1), 3, q, Qf, m));
                }
                FY[(static_cast<std::size_t>(J) * Nx + i) * Qf + q] = lf_flux(pb, B, Tp, 1, alpha[1]);
            }
        }
    });

    const double sx = 2.0 / mesh.dx(), sy = 2.0 / mesh.dy();
    const double ix = 1.0 / mesh.dx(), iy = 1.0 / mesh.dy();
    parallel_for(mesh.cells(), [&](int cell) {
        const int i = cell % Nx, j = cell / Nx;
        double r[kMaxComponents][64];
        for (int comp = 0; comp < m; ++comp) std::fill(r[comp], r[comp] + nb, 0.0);
        // Volume terms.
        for (int qx = 0; qx < Qv; ++qx) {
            for (int qy = 0; qy < Qv; ++qy) {
                const std::size_t base = (static_cast<std::size_t>(qx) * Qv + qy) * nb;
                const double w = basis.vq_weights[qx] * basis.vq_weights[qy];
                State s{}, f1{}, f2{};
                for (int comp = 0; comp < m; ++comp) {
                    const double* cc = u.coeffs(cell, comp);
                    double v = 0.0;
                    for (int a = 0; a < nb; ++a) v += cc[a] * basis.vol_phi[base + a];
                    s[comp] = v;
                }
                pb.flux(s, 0, f1);
                pb.flux(s, 1, f2);
                for (int comp = 0; comp < m; ++comp) {
                    const double g1 = w * sx * f1[comp], g2 = w * sy * f2[comp];
                    for (int a = 1; a < nb; ++a) r[comp][a] += g1 * basis.vol_dxi[base + a] + g2 * basis.vol_deta[base + a];
                }
            }
        }
        // Surface terms.
        for (int q = 0; q < Qf; ++q) {
            const double w = basis.fq_weights[q];
            const State& fl = FX[(static_cast<std::size_t>(j) * (Nx + 1) + i) * Qf + q];
            const State& fr = FX[(static_cast<std::size_t>(j) * (Nx + 1) + i + 1) * Qf + q];
            const State& fb = FY[(static_cast<std::size_t>(j) * Nx + i) * Qf + q];
            const State& ft = FY[(static_cast<std::size_t>(j + 1) * Nx + i) * Qf + q];
            const double* phl = &basis.face_phi[(0 * Qf + q) * nb];
            const double* phr = &basis.face_phi[(1 * Qf + q) * nb];
            const double* phb = &basis.face_phi[(2 * Qf + q) * nb];
            const double* pht = &basis.face_phi[(3 * Qf + q) * nb];
            for (int comp = 0; comp < m; ++comp) {
                for (int a = 0; a < nb; ++a) {
                    r[comp][a] -= w * (ix * (fr[comp] * phr[a] - fl[comp] * phl[a]) +
                                       iy * (ft[comp] * pht[a] - fb[comp] * phb[a]));
                }
            }
        }
        for (int comp = 0; comp < m; ++comp) std::copy(r[comp], r[comp] + nb, out.coeffs(cell, comp));
    });
}

DtChoice compute_dt(const DGField& u, const ProblemSpec& pb, const Basis& basis, const LimiterCAD& lc, double c0,
                    double cssp, double dt_max) {
    const auto a = max_wave_speeds(u, pb, basis);
    const double dx = u.mesh.dx(), dy = u.mesh.dy();
    DtChoice d;
    GeneralCAD g;
    g.boundary = lc.face_weight;
    d.bp = bp_cfl_dt(g, a[0], a[1], dx, dy, c0);
    const double rate = a[0] / dx + a[1] / dy;
    d.linear = rate > 0.0 ? 1.0 / ((2.0 * u.k + 1.0) * rate) : kUnboundedStep;
    const double base = std::min(d.bp, d.linear);
    d.active = d.bp <= d.linear ? "bp" : "linear";
    d.dt = cssp * base;
    if (!(d.dt <= dt_max)) {
        d.dt = dt_max;
        d.active = "cap";
    }
    return d;
}

// ---------------------------------------------------------------------------
// Limiters

State internal_part(const DGField& u, int cell, const Basis& basis, const LimiterCAD& lc) {
    const int Qf = basis.Qf(), nb = u.nb;
    State pi{};
    for (int comp = 0; comp < u.m; ++comp) {
        const double* cc = u.coeffs(cell, comp);
        double faces = 0.0;
        for (int side = 0; side < 4; ++side) {
            double fm = 0.0;
            for (int q = 0; q < Qf; ++q) {
                const double* phi = &basis.face_phi[(side * Qf + q) * nb];
                double v = 0.0;
                for (int a = 0; a < nb; ++a) v += cc[a] * phi[a];
                fm += basis.fq_weights[q] * v;
            }
            faces += lc.face_weight[side] * fm;
        }
        pi[comp] = (cc[0] - faces) / lc.internal_weight;
    }
    return pi;
}

namespace {

constexpr double kNoInternal = 1e-14;

// Values of one component at the limiter check points of a cell.
void check_values(const DGField& u, int cell, int comp, const Basis& basis, const LimiterCAD& lc, LimiterMode mode,
                  std::vector<double>& vals) {
    vals.clear();
    const int Qf = basis.Qf(), nb = u.nb;
    const double* cc = u.coeffs(cell, comp);
    for (int sq = 0; sq < 4 * Qf; ++sq) {
        const double* phi = &basis.face_phi[static_cast<std::size_t>(sq) * nb];
        double v = 0.0;
        for (int a = 0; a < nb; ++a) v += cc[a] * phi[a];
        vals.push_back(v);
    }
    if (mode == LimiterMode::full) {
        for (const auto& n : lc.nodes) {
            double v = 0.0;
            for (int a = 0; a < nb; ++a) v += cc[a] * basis.eval_mode(a, n.x, n.y);
            vals.push_back(v);
        }
    } else if (lc.internal_weight > kNoInternal) {
        // Pi from the traces just computed.
        double faces = 0.0;
        for (int side = 0; side < 4; ++side) {
            double fm = 0.0;
            for (int q = 0; q < Qf; ++q) fm += basis.fq_weights[q] * vals[side * Qf + q];
            faces += lc.face_weight[side] * fm;
        }
        vals.push_back((cc[0] - faces) / lc.internal_weight);
    }
}

void scale_about_mean(double* cc, int nb, double s) {
    for (int a = 1; a < nb; ++a) cc[a] *= s;
}

double safe_ratio(double num, double den) {
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(num / den);
}

}  // namespace

LimitStats bp_limit_scalar(DGField& u, const Basis& basis, const LimiterCAD& lc, double umin, double umax,
                           LimiterMode mode) {
    const int n = u.mesh.cells();
    std::vector<int> limited(n, 0);
    std::vector<double> cmin(n), cmax(n);
    parallel_for(n, [&](int cell) {
        thread_local std::vector<double> vals;
        double* cc = u.coeffs(cell, 0);
        const double ubar = cc[0];
        if (mode != LimiterMode::none && (ubar < umin - 1e-12 || ubar > umax + 1e-12)) {
            throw NumericError("bp_limit_scalar: cell average " + std::to_string(ubar) + " outside bounds in cell " +
                               std::to_string(cell));
        }
        check_values(u, cell, 0, basis, lc, mode == LimiterMode::none ? LimiterMode::simplified : mode, vals);
        const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
        double pmin = *lo, pmax = *hi;
        if (mode != LimiterMode::none) {
            const double delta =
                std::min({safe_ratio(umax - ubar, pmax - ubar), safe_ratio(umin - ubar, pmin - ubar), 1.0});
            if (delta < 1.0) {
                scale_about_mean(cc, u.nb, delta);
                pmin = ubar + delta * (pmin - ubar);
                pmax = ubar + delta * (pmax - ubar);
                limited[cell] = 1;
            }
        }
        cmin[cell] = pmin;
        cmax[cell] = pmax;
    });
    LimitStats st;
    st.limited_cells = static_cast<int>(std::count(limited.begin(), limited.end(), 1));
    st.min_check = *std::min_element(cmin.begin(), cmin.end());
    st.max_check = *std::max_element(cmax.begin(), cmax.end());
    return st;
}

LimitStats bp_limit_euler(DGField& u, const ProblemSpec& pb, const Basis& basis, const LimiterCAD& lc) {
    const int n = u.mesh.cells();
    const int Qf = basis.Qf(), nb = u.nb;
    std::vector<int> limited(n, 0);
    std::vector<double> rmin(n), emin(n);
    parallel_for(n, [&](int cell) {
        State ubar{};
        for (int c = 0; c < 4; ++c) ubar[c] = u.mean(cell, c);
        const double rhoe_bar = pb.internal_energy(ubar);
        if (!(ubar[0] > 0.0) || !(rhoe_bar > 0.0)) {
            throw NumericError("bp_limit_euler: inadmissible cell average in cell " + std::to_string(cell) +
                               " (rho=" + std::to_string(ubar[0]) + ", rho e=" + std::to_string(rhoe_bar) + ")");
        }
        const bool have_pi = lc.internal_weight > kNoInternal;

        // Stage 1: density.
        thread_local std::vector<double> vals;
        check_values(u, cell, 0, basis, lc, LimiterMode::simplified, vals);
        const double rho_min = *std::min_element(vals.begin(), vals.end());
        const double eps1 = std::min(1e-13, ubar[0]);
        const double t1 = std::min(safe_ratio(ubar[0] - eps1, ubar[0] - rho_min), 1.0);
        if (t1 < 1.0) {
            scale_about_mean(u.coeffs(cell, 0), nb, t1);
            limited[cell] = 1;
        }

        // Stage 2: internal energy of the density-limited polynomial.
        double e_min = std::numeric_limits<double>::infinity();
        for (int sq = 0; sq < 4 * Qf; ++sq) {
            const double* phi = &basis.face_phi[static_cast<std::size_t>(sq) * nb];
            State s{};
            for (int c = 0; c < 4; ++c) {
                const double* cc = u.coeffs(cell, c);
                double v = 0.0;
                for (int a = 0; a < nb; ++a) v += cc[a] * phi[a];
                s[c] = v;
            }
            e_min = std::min(e_min, pb.internal_energy(s));
        }
        if (have_pi) e_min = std::min(e_min, pb.internal_energy(internal_part(u, cell, basis, lc)));
        const double eps2 = std::min(1e-13, rhoe_bar);
        const double t2 = std::min(safe_ratio(rhoe_bar - eps2, rhoe_bar - e_min), 1.0);
        if (t2 < 1.0) {
            for (int c = 0; c < 4; ++c) scale_about_mean(u.coeffs(cell, c), nb, t2);
            limited[cell] = 1;
        }
        // Post-limit minima over the check set.
        double r = std::numeric_limits<double>::infinity(), e = r;
        for (int sq = 0; sq < 4 * Qf; ++sq) {
            const double* phi = &basis.face_phi[static_cast<std::size_t>(sq) * nb];
            State s{};
            for (int c = 0; c < 4; ++c) {
                const double* cc = u.coeffs(cell, c);
                double v = 0.0;
                for (int a = 0; a < nb; ++a) v += cc[a] * phi[a];
                s[c] = v;
            }
            r = std::min(r, s[0]);
            e = std::min(e, pb.internal_energy(s));
        }
        if (have_pi) {
            const State pi = internal_part(u, cell, basis, lc);
            r = std::min(r, pi[0]);
            e = std::min(e, pb.internal_energy(pi));
        }
        rmin[cell] = r;
        emin[cell] = e;
    });
    LimitStats st;
    st.limited_cells = static_cast<int>(std::count(limited.begin(), limited.end(), 1));
    st.min_check = std::min(*std::min_element(rmin.begin(), rmin.end()), *std::min_element(emin.begin(), emin.end()));
    st.max_check = st.min_check;
    return st;
}

namespace {

double minmod(double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
    if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
    return 0.0;
}

double tvb_minmod(double a, double b, double c, double Mh2) {
    return std::abs(a) <= Mh2 ? a : minmod(a, b, c);
}

}  // namespace

int tvb_limit(DGField& u, const ProblemSpec& pb, double M) {
    const Mesh2D& mesh = u.mesh;
    const int Nx = mesh.Nx, Ny = mesh.Ny, nb = u.nb, m = u.m;
    if (u.k < 1) return 0;
    int m10 = -1, m01 = -1;
    {
        const Basis b(u.k);
        for (int a = 0; a < nb; ++a) {
            if (b.modes[a] == std::array<int, 2>{1, 0}) m10 = a;
            if (b.modes[a] == std::array<int, 2>{0, 1}) m01 = a;
        }
    }
    std::vector<double> means(static_cast<std::size_t>(mesh.cells()) * m);
    for (int cell = 0; cell < mesh.cells(); ++cell) {
        for (int c = 0; c < m; ++c) means[static_cast<std::size_t>(cell) * m + c] = u.mean(cell, c);
    }
    // Neighbour mean of component c across `side`, with ghost states.
    auto nmean = [&](int i, int j, int side, int c) {
        int ii = i + (side == 0 ? -1 : side == 1 ? 1 : 0);
        int jj = j + (side == 2 ? -1 : side == 3 ? 1 : 0);
        const bool out = ii < 0 || ii >= Nx || jj < 0 || jj >= Ny;
        if (out) {
            const Boundary b = mesh.bc[side];
            if (b == Boundary::periodic) {
                ii = (ii + Nx) % Nx;
                jj = (jj + Ny) % Ny;
            } else if (b == Boundary::fixed_inflow) {
                return pb.inflow[c];
            } else {
                ii = i;
                jj = j;
            }
        }
        return means[static_cast<std::size_t>(mesh.cell(ii, jj)) * m + c];
    };
    const double Mx = M * mesh.dx() * mesh.dx(), My = M * mesh.dy() * mesh.dy();
    const Basis basis(u.k);
    std::vector<int> touched(mesh.cells(), 0);
    parallel_for(mesh.cells(), [&](int cell) {
        const int i = cell % Nx, j = cell / Nx;
        bool troubled = false;
        for (int c = 0; c < m && !troubled; ++c) {
            const double* cc = u.coeffs(cell, c);
            double xr = 0.0, xl = 0.0, yt = 0.0, yb = 0.0;
            for (int a = 0; a < nb; ++a) {
                const int p = basis.modes[a][0], q = basis.modes[a][1];
                const double s = std::sqrt(2.0 * (p + q) + 1.0);
                if (q == 0) {
                    xr += cc[a] * s;
                    xl += cc[a] * (p % 2 ? -s : s);
                }
                if (p == 0) {
                    yt += cc[a] * s;
                    yb += cc[a] * (q % 2 ? -s : s);
                }
            }
            const double ub = cc[0];
            const double dxp = nmean(i, j, 1, c) - ub, dxm = ub - nmean(i, j, 0, c);
            const double dyp = nmean(i, j, 3, c) - ub, dym = ub - nmean(i, j, 2, c);
            const double tol = 1e-12 * (1.0 + std::abs(ub));
            auto changed = [&](double a, double b, double d, double Mh2) {
                return std::abs(tvb_minmod(a, b, d, Mh2) - a) > tol;
            };
            troubled = changed(xr - ub, dxp, dxm, Mx) || changed(ub - xl, dxp, dxm, Mx) ||
                       changed(yt - ub, dyp, dym, My) || changed(ub - yb, dyp, dym, My);
        }
        if (!troubled) return;
        touched[cell] = 1;
        const double r3 = std::sqrt(3.0);
        for (int c = 0; c < m; ++c) {
            double* cc = u.coeffs(cell, c);
            const double ub = cc[0];
            const double sx = minmod(r3 * cc[m10], nmean(i, j, 1, c) - ub, ub - nmean(i, j, 0, c)) / r3;
            const double sy = minmod(r3 * cc[m01], nmean(i, j, 3, c) - ub, ub - nmean(i, j, 2, c)) / r3;
            for (int a = 1; a < nb; ++a) cc[a] = 0.0;
            cc[m10] = sx;
            cc[m01] = sy;
        }
    });
    return static_cast<int>(std::count(touched.begin(), touched.end(), 1));
}

LimitStats apply_limiters(DGField& u, const ProblemSpec& pb, const Basis& basis, const LimiterCAD& lc,
                          const StepControl& ctl) {
    if (ctl.tvb) tvb_limit(u, pb, ctl.tvb_M);
    if (pb.kind == ProblemKind::euler) {
        if (ctl.limiter == LimiterMode::none) return {};
        return bp_limit_euler(u, pb, basis, lc);
    }
    return bp_limit_scalar(u, basis, lc, pb.umin, pb.umax, ctl.limiter);
}

namespace {

void check_finite(const DGField& u) {
    for (int cell = 0; cell < u.mesh.cells(); ++cell) {
        for (int c = 0; c < u.m; ++c) {
            if (!std::isfinite(u.mean(cell, c))) {
                throw NumericError("non-finite cell average in cell " + std::to_string(cell) + " (i=" +
                                   std::to_string(cell % u.mesh.Nx) + ", j=" + std::to_string(cell / u.mesh.Nx) + ")");
            }
        }
    }
}

void merge(LimitStats& acc, const LimitStats& s, bool first) {
    if (first) {
        acc = s;
        return;
    }
    acc.limited_cells += s.limited_cells;
    acc.min_check = std::min(acc.min_check, s.min_check);
    acc.max_check = std::max(acc.max_check, s.max_check);
}

}  // namespace

LimitStats ssp_rk3_step(DGField& u, const ProblemSpec& pb, const Basis& basis, const LimiterCAD& lc, double dt,
                        const StepControl& ctl) {
    DGField L(u.mesh, u.k, u.m);
    LimitStats st;
    // u1 = u + dt L(u)
    dg_rhs(u, pb, basis, L);
    DGField u1 = u;
    for (std::size_t i = 0; i < u.c.size(); ++i) u1.c[i] = u.c[i] + dt * L.c[i];
    check_finite(u1);
    merge(st, apply_limiters(u1, pb, basis, lc, ctl), true);
    // u2 = 3/4 u + 1/4 (u1 + dt L(u1))
    dg_rhs(u1, pb, basis, L);
    DGField u2 = u;
    for (std::size_t i = 0; i < u.c.size(); ++i) u2.c[i] = 0.75 * u.c[i] + 0.25 * (u1.c[i] + dt * L.c[i]);
    check_finite(u2);
    merge(st, apply_limiters(u2, pb, basis, lc, ctl), false);
    // u3 = 1/3 u + 2/3 (u2 + dt L(u2))
    dg_rhs(u2, pb, basis, L);
    for (std::size_t i = 0; i < u.c.size(); ++i) u.c[i] = u.c[i] / 3.0 + 2.0 / 3.0 * (u2.c[i] + dt * L.c[i]);
    check_finite(u);
    merge(st, apply_limiters(u, pb, basis, lc, ctl), false);
    return st;
}

double l2_error(const DGField& u, const ProblemSpec& pb, double t) {
    if (!pb.exact) throw std::invalid_argument("l2_error: problem has no exact solution");
    const Mesh2D& mesh = u.mesh;
    const QuadRule1D g = gauss(u.k + 3);
    const int Q = static_cast<int>(g.size());
    std::vector<double> per(mesh.cells());
    parallel_for(mesh.cells(), [&](int cell) {
        const int i = cell % mesh.Nx, j = cell / mesh.Nx;
        double s = 0.0;
        for (int qx = 0; qx < Q; ++qx) {
            for (int qy = 0; qy < Q; ++qy) {
                const double x = mesh.xc(i) + 0.5 * mesh.dx() * g.nodes[qx];
                const double y = mesh.yc(j) + 0.5 * mesh.dy() * g.nodes[qy];
                const double e = u.eval(cell, g.nodes[qx], g.nodes[qy])[0] - pb.exact(x, y, t)[0];
                s += g.weights[qx] * g.weights[qy] * e * e;
            }
        }
        per[cell] = s;
    });
    double sum = 0.0;
    for (double v : per) sum += v;
    return std::sqrt(sum / mesh.cells());
}

// ---------------------------------------------------------------------------
// Driver

namespace {

LimiterMode limiter_from_string(const std::string& s) {
    if (s == "none") return LimiterMode::none;
    if (s == "full") return LimiterMode::full;
    if (s == "simplified") return LimiterMode::simplified;
    throw std::invalid_argument("unknown limiter mode '" + s + "' (none|full|simplified)");
}

SymmetricCAD select_cad(const std::string& sel, int k, double theta) {
    const SpaceId space{Family::P, k};
    if (sel == "classic") return classic_2d(space, theta);
    if (sel == "optimal") return optimal_cad(k, theta);
    if (sel == "quasi") {
        if (k <= 7) return quasi_optimal(k, theta);
        return quasi_optimal(k, theta, optimal_cad(k, 0.0));
    }
    if (sel.rfind("file:", 0) == 0) {
        SymmetricCAD cad = read_cad_file(sel.substr(5));
        if (cad.space.family != Family::P || cad.space.degree < k) {
            throw std::invalid_argument("CAD file space does not cover P^" + std::to_string(k));
        }
        return cad;
    }
    throw std::invalid_argument("unknown CAD selection '" + sel + "' (classic|optimal|quasi|file:<path>)");
}

void write_field_csv(const std::string& path, const DGField& u) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "i,j,x,y";
    for (int c = 0; c < u.m; ++c) f << ",u" << c;
    f << "\n";
    char buf[64];
    for (int j = 0; j < u.mesh.Ny; ++j) {
        for (int i = 0; i < u.mesh.Nx; ++i) {
            const int cell = u.mesh.cell(i, j);
            f << i << "," << j;
            std::snprintf(buf, sizeof buf, ",%.12g,%.12g", u.mesh.xc(i), u.mesh.yc(j));
            f << buf;
            for (int c = 0; c < u.m; ++c) {
                std::snprintf(buf, sizeof buf, ",%.12g", u.mean(cell, c));
                f << buf;
            }
            f << "\n";
        }
    }
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg;
    try {
        const std::string kind = j.value("problem", std::string("advection"));
        if (kind == "advection") {
            cfg.kind = ProblemKind::advection;
        } else if (kind == "burgers") {
            cfg.kind = ProblemKind::burgers;
            cfg.t_end = 0.23;
        } else if (kind == "euler") {
            cfg.kind = ProblemKind::euler;
            cfg.t_end = 0.6;
            cfg.ny_ratio = 0.5;
            cfg.tvb = true;
            cfg.N = {150};
        } else {
            throw std::invalid_argument("unknown problem '" + kind + "' (advection|burgers|euler)");
        }
        cfg.k = j.value("k", cfg.k);
        if (j.contains("N")) {
            if (j["N"].is_array()) {
                cfg.N = j["N"].get<std::vector<int>>();
            } else {
                cfg.N = {j["N"].get<int>()};
            }
        }
        cfg.ny_ratio = j.value("ny_ratio", cfg.ny_ratio);
        cfg.t_end = j.value("t_end", cfg.t_end);
        cfg.cad = j.value("cad", cfg.cad);
        cfg.c0 = j.value("c0", cfg.c0);
        cfg.cssp = j.value("cssp", cfg.cssp);
        if (j.contains("limiter")) cfg.limiter = limiter_from_string(j["limiter"].get<std::string>());
        cfg.tvb = j.value("tvb", cfg.tvb);
        cfg.tvb_M = j.value("tvb_M", cfg.tvb_M);
        cfg.dt_max = j.value("dt_max", cfg.dt_max);
        cfg.dt_exponent = j.value("dt_exponent", cfg.dt_exponent);
        cfg.theta_per_step = j.value("theta_per_step", cfg.theta_per_step);
        cfg.out_dir = j.value("out_dir", cfg.out_dir);
        cfg.dump_fields = j.value("dump_fields", cfg.dump_fields);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config schema error: ") + e.what());
    }
    if (cfg.k < 1 || cfg.N.empty() || cfg.t_end <= 0.0) throw std::invalid_argument("config: need k >= 1, N, t_end > 0");
    return cfg;
}

RunResult run_case(const RunConfig& cfg) {
    RunResult res;
    ProblemSpec pb = cfg.kind == ProblemKind::advection ? advection_problem()
                     : cfg.kind == ProblemKind::burgers ? burgers_problem()
                                                         : shock_vortex_problem();
    const Basis basis(cfg.k);
    const StepControl ctl{cfg.limiter, cfg.tvb, cfg.tvb_M};
    double dt_ref = 0.0;
    if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);

    for (std::size_t r = 0; r < cfg.N.size(); ++r) {
        const int N = cfg.N[r];
        const int Ny = std::max(1, static_cast<int>(std::lround(N * cfg.ny_ratio)));
        Mesh2D mesh = cfg.kind == ProblemKind::euler ? shock_vortex_mesh(N, Ny) : Mesh2D(N, Ny, -1.0, 1.0, -1.0, 1.0);
        const auto t0 = std::chrono::steady_clock::now();

        DGField u = l2_project(pb.initial, mesh, cfg.k, pb.m);
        auto theta_now = [&] {
            const auto a = max_wave_speeds(u, pb, basis);
            return a[0] + a[1] > 0.0 ? theta_of(a[0], a[1], mesh.dx(), mesh.dy()) : 0.0;
        };
        RunRow row;
        row.N = N;
        row.theta = theta_now();
        LimiterCAD lc = make_limiter_cad(select_cad(cfg.cad, cfg.k, row.theta));
        row.wbar = lc.cad.boundary_weight;

        LimitStats st = apply_limiters(u, pb, basis, lc, ctl);
        row.min_check = st.min_check;
        row.max_check = st.max_check;
        auto track_means = [&](bool first) {
            for (int cell = 0; cell < mesh.cells(); ++cell) {
                const double v = u.mean(cell, 0);
                if (first) {
                    row.min_mean = row.max_mean = v;
                    first = false;
                }
                row.min_mean = std::min(row.min_mean, v);
                row.max_mean = std::max(row.max_mean, v);
                if (pb.kind == ProblemKind::euler) {
                    State s{};
                    for (int c = 0; c < 4; ++c) s[c] = u.mean(cell, c);
                    row.min_rho = std::min(row.min_rho, s[0]);
                    row.min_rhoe = std::min(row.min_rhoe, pb.internal_energy(s));
                }
            }
        };
        row.min_rho = row.min_rhoe = std::numeric_limits<double>::infinity();
        track_means(true);

        double t = 0.0;
        try {
            while (t < cfg.t_end * (1.0 - 1e-14)) {
                if (cfg.theta_per_step && t > 0.0) lc = make_limiter_cad(select_cad(cfg.cad, cfg.k, theta_now()));
                double dt;
                if (cfg.dt_exponent > 0.0 && r > 0) {
                    dt = dt_ref * std::pow(static_cast<double>(cfg.N[0]) / N, cfg.dt_exponent);
                    row.dt_active = "scaled";
                } else {
                    const DtChoice d = compute_dt(u, pb, basis, lc, cfg.c0, cfg.cssp, cfg.dt_max);
                    dt = d.dt;
                    row.dt_active = d.active;
                    if (r == 0 && row.steps == 0) dt_ref = dt;
                }
                if (t + dt > cfg.t_end) dt = cfg.t_end - t;
                st = ssp_rk3_step(u, pb, basis, lc, dt, ctl);
                row.min_check = std::min(row.min_check, st.min_check);
                row.max_check = std::max(row.max_check, st.max_check);
                t += dt;
                ++row.steps;
                track_means(false);
            }
        } catch (const NumericError&) {
            row.finite = false;
            if (cfg.limiter != LimiterMode::none) throw;
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        row.l2_error = pb.exact && row.finite ? l2_error(u, pb, cfg.t_end) : kNaN;
        row.order = kNaN;
        if (r > 0 && std::isfinite(row.l2_error) && std::isfinite(res.rows.back().l2_error)) {
            row.order = std::log(res.rows.back().l2_error / row.l2_error) /
                        std::log(static_cast<double>(N) / res.rows.back().N);
        }
        res.rows.push_back(row);
        if (cfg.dump_fields && !cfg.out_dir.empty()) {
            write_field_csv(cfg.out_dir + "/field_" + std::to_string(N) + ".csv", u);
        }
        res.fields.push_back(std::move(u));
    }

    if (!cfg.out_dir.empty()) {
        std::ofstream f(cfg.out_dir + "/errors.csv");
        f << "N,l2_error,order,steps,wall_ms\n";
        char buf[128];
        for (const auto& row : res.rows) {
            std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%ld,%.12g\n", row.N, row.l2_error, row.order, row.steps,
                          row.wall_ms);
            f << buf;
        }
    }
    return res;
}

}  // namespace ocad::dg
