#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "ocad/constructors.hpp"
#include "ocad/dg_solver.hpp"
#include "ocad/errors.hpp"
#include "ocad/optimizer.hpp"

using namespace ocad;
using namespace ocad::dg;

namespace {

constexpr double kPi = 3.14159265358979323846;

DGField random_field(const Mesh2D& mesh, int k, int m, std::mt19937_64& rng, const State& base, double amp) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    DGField u(mesh, k, m);
    for (int cell = 0; cell < mesh.cells(); ++cell) {
        for (int c = 0; c < m; ++c) {
            double* cc = u.coeffs(cell, c);
            cc[0] = base[c] + amp * U(rng);
            for (int a = 1; a < u.nb; ++a) cc[a] = 0.2 * amp * U(rng) / a;
        }
    }
    return u;
}

State lf(const ProblemSpec& pb, const State& L, const State& R, int dir, double alpha) {
    State fl{}, fr{}, out{};
    pb.flux(L, dir, fl);
    pb.flux(R, dir, fr);
    for (int c = 0; c < pb.m; ++c) out[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * alpha * (R[c] - L[c]);
    return out;
}

// Cell-average update written directly as a flux difference over the faces:
// d ubar / dt = -(1/dx) mean_q [F(x+) - F(x-)] - (1/dy) mean_q [G(y+) - G(y-)].
// Traces come from DGField::eval, ghosts follow the mesh boundary kinds.
std::vector<State> mean_rhs_oracle(const DGField& u, const ProblemSpec& pb) {
    const Mesh2D& M = u.mesh;
    const auto g = oracle::golub_welsch(u.k + 1);
    const int Q = static_cast<int>(g.x.size());
    std::array<double, 2> alpha{0.0, 0.0};
    if (pb.kind == ProblemKind::advection) {
        alpha = {std::abs(pb.ax), std::abs(pb.ay)};
    } else {
        for (int cell = 0; cell < M.cells(); ++cell)
            for (int q = 0; q < Q; ++q)
                for (const auto& s : {u.eval(cell, -1, g.x[q]), u.eval(cell, 1, g.x[q]), u.eval(cell, g.x[q], -1),
                                      u.eval(cell, g.x[q], 1)})
                    for (int d = 0; d < 2; ++d) alpha[d] = std::max(alpha[d], pb.speed(s, d));
        for (int side = 0; side < 4; ++side)
            if (M.bc[side] == Boundary::fixed_inflow)
                for (int d = 0; d < 2; ++d) alpha[d] = std::max(alpha[d], pb.speed(pb.inflow, d));
    }
    auto outside = [&](Boundary b, const State& in) { return b == Boundary::fixed_inflow ? pb.inflow : in; };
    std::vector<State> out(M.cells());
    for (int j = 0; j < M.Ny; ++j) {
        for (int i = 0; i < M.Nx; ++i) {
            const int cell = M.cell(i, j);
            State acc{};
            for (int q = 0; q < Q; ++q) {
                const double w = g.w[q], s = g.x[q];
                // x+ face
                State L = u.eval(cell, 1, s), R;
                if (i + 1 < M.Nx) R = u.eval(M.cell(i + 1, j), -1, s);
                else R = M.bc[1] == Boundary::periodic ? u.eval(M.cell(0, j), -1, s) : outside(M.bc[1], L);
                const State fxp = lf(pb, L, R, 0, alpha[0]);
                // x- face
                R = u.eval(cell, -1, s);
                if (i > 0) L = u.eval(M.cell(i - 1, j), 1, s);
                else L = M.bc[0] == Boundary::periodic ? u.eval(M.cell(M.Nx - 1, j), 1, s) : outside(M.bc[0], R);
                const State fxm = lf(pb, L, R, 0, alpha[0]);
                // y+ face
                State B = u.eval(cell, s, 1), T;
                if (j + 1 < M.Ny) T = u.eval(M.cell(i, j + 1), s, -1);
                else T = M.bc[3] == Boundary::periodic ? u.eval(M.cell(i, 0), s, -1) : outside(M.bc[3], B);
                const State fyp = lf(pb, B, T, 1, alpha[1]);
                // y- face
                T = u.eval(cell, s, -1);
                if (j > 0) B = u.eval(M.cell(i, j - 1), s, 1);
                else B = M.bc[2] == Boundary::periodic ? u.eval(M.cell(i, M.Ny - 1), s, 1) : outside(M.bc[2], T);
                const State fym = lf(pb, B, T, 1, alpha[1]);
                for (int c = 0; c < pb.m; ++c)
                    acc[c] -= w * ((fxp[c] - fxm[c]) / M.dx() + (fyp[c] - fym[c]) / M.dy());
            }
            out[cell] = acc;
        }
    }
    return out;
}

double total_mean(const DGField& u, int comp = 0) {
    double s = 0.0;
    for (int cell = 0; cell < u.mesh.cells(); ++cell) s += u.mean(cell, comp);
    return s;
}

double max_diff(const DGField& a, const DGField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) d = std::max(d, std::abs(a.c[i] - b.c[i]));
    return d;
}

// All limiter check points: face Gauss traces and the expanded internal nodes.
std::pair<double, double> check_range(const DGField& u, const Basis& basis, const LimiterCAD& lc) {
    double lo = 1e300, hi = -1e300;
    for (int cell = 0; cell < u.mesh.cells(); ++cell) {
        auto upd = [&](double v) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        };
        for (double s : basis.fq_nodes) {
            upd(u.eval(cell, -1, s)[0]);
            upd(u.eval(cell, 1, s)[0]);
            upd(u.eval(cell, s, -1)[0]);
            upd(u.eval(cell, s, 1)[0]);
        }
        for (const auto& n : lc.nodes) upd(u.eval(cell, n.x, n.y)[0]);
    }
    return {lo, hi};
}

ProblemSpec periodic_euler() {
    ProblemSpec pb = shock_vortex_problem();
    pb.initial = [](double x, double y) {
        State s{};
        const double rho = 1.0 + 0.3 * std::sin(kPi * (x + y)), v1 = 0.5, v2 = -0.3, p = 1.0;
        s[0] = rho;
        s[1] = rho * v1;
        s[2] = rho * v2;
        s[3] = p / 0.4 + 0.5 * rho * (v1 * v1 + v2 * v2);
        return s;
    };
    pb.exact = nullptr;
    return pb;
}

}  // namespace

TEST_CASE("L2 projection") {
    const Mesh2D mesh(6, 5, -1, 1, -1, 1);
    const auto c = l2_project([](double, double) { return State{0.7, 0, 0, 0}; }, mesh, 3, 1);
    for (int cell = 0; cell < mesh.cells(); ++cell) {
        CHECK(c.mean(cell, 0) == doctest::Approx(0.7).epsilon(1e-15));
        for (int a = 1; a < c.nb; ++a) CHECK(std::abs(c.coeffs(cell, 0)[a]) <= 1e-15);
    }
    CHECK(c.nb == 10);

    // Degree-3 polynomial: cell means reproduce the exact integral.
    auto f = [](double x, double y) { return State{x * x * x + 0.5 * x * y * y - y * y + 2.0, 0, 0, 0}; };
    const auto p = l2_project(f, mesh, 2, 1);
    const double exact = oracle::cell_mean([&](double x, double y) { return f(x, y)[0]; });
    CHECK(std::abs(total_mean(p) / mesh.cells() - exact) <= 1e-12);

    // Projection error of a smooth field decays like dx^3 for k = 2.
    ProblemSpec adv = advection_problem();
    double prev = 0.0, order = 0.0;
    for (int N : {10, 20, 40}) {
        const Mesh2D m(N, N, -1, 1, -1, 1);
        const double e = l2_error(l2_project(adv.initial, m, 2, 1), adv, 0.0);
        if (prev > 0.0) order = std::log2(prev / e);
        prev = e;
    }
    CHECK(order > 2.9);
    CHECK(order < 3.2);
}

TEST_CASE("Lax-Friedrichs flux") {
    const ProblemSpec adv = advection_problem(1.0, 0.0);
    const State u{0.3, 0, 0, 0};
    State f{};
    adv.flux(u, 0, f);
    CHECK(lf_flux(adv, u, u, 0, 1.0)[0] == f[0]);
    CHECK(lf_flux(adv, State{0, 0, 0, 0}, State{1, 0, 0, 0}, 0, 1.0)[0] == 0.0);
    const ProblemSpec eu = shock_vortex_problem();
    const State s = eu.initial(0.1, 0.5);
    const State F = lf_flux(eu, s, s, 1, 2.0);
    for (int c = 0; c < 4; ++c) CHECK(std::isfinite(F[c]));
}

TEST_CASE("admissible sets are convex") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-3.0, 3.0), Pos(0.01, 3.0);
    const ProblemSpec eu = shock_vortex_problem();
    const ProblemSpec bg = burgers_problem();
    for (int t = 0; t < 2000; ++t) {
        State a{}, b{};
        for (State* s : {&a, &b}) {
            const double rho = Pos(rng), v1 = U(rng), v2 = U(rng), p = Pos(rng);
            *s = {rho, rho * v1, rho * v2, p / 0.4 + 0.5 * rho * (v1 * v1 + v2 * v2)};
        }
        State mid{};
        for (int c = 0; c < 4; ++c) mid[c] = 0.5 * (a[c] + b[c]);
        REQUIRE(eu.admissible(a));
        CHECK(eu.admissible(mid));
        const State sa{U(rng) / 3, 0, 0, 0}, sb{U(rng) / 3, 0, 0, 0};
        CHECK(bg.admissible(State{0.5 * (sa[0] + sb[0]), 0, 0, 0}));
    }
    CHECK_FALSE(eu.admissible(State{-1e-3, 0, 0, 1}));
    CHECK_FALSE(bg.admissible(State{1.0 + 1e-6, 0, 0, 0}));
}

TEST_CASE("RHS of a constant state vanishes") {
    for (int k : {1, 2, 4}) {
        const Basis basis(k);
        const Mesh2D mesh(5, 4, -1, 1, -1, 1);
        ProblemSpec pbs[] = {advection_problem(), burgers_problem(), periodic_euler()};
        const State consts[] = {{0.4, 0, 0, 0}, {-0.3, 0, 0, 0}, {1.2, 0.3, -0.2, 3.0}};
        for (int i = 0; i < 3; ++i) {
            const auto u = l2_project([&](double, double) { return consts[i]; }, mesh, k, pbs[i].m);
            DGField r(mesh, k, pbs[i].m);
            dg_rhs(u, pbs[i], basis, r);
            for (double v : r.c) CHECK(std::abs(v) <= 1e-12);
        }
    }
}

TEST_CASE("mean mode equals the flux-difference update") {
    std::mt19937_64 rng(23);
    for (int k : {1, 2, 3, 4}) {
        const Basis basis(k);
        {
            const Mesh2D mesh(7, 5, -1, 1, -1, 1);
            for (const auto& pb : {advection_problem(1.0, 0.6), burgers_problem()}) {
                const auto u = random_field(mesh, k, 1, rng, State{0, 0, 0, 0}, 0.8);
                DGField r(mesh, k, 1);
                dg_rhs(u, pb, basis, r);
                const auto o = mean_rhs_oracle(u, pb);
                for (int cell = 0; cell < mesh.cells(); ++cell) CHECK(std::abs(r.mean(cell, 0) - o[cell][0]) <= 1e-12);
            }
        }
        {
            // Inflow on the left, outflow elsewhere.
            const ProblemSpec pb = shock_vortex_problem();
            const Mesh2D mesh = shock_vortex_mesh(8, 4);
            const auto u = random_field(mesh, k, 4, rng, State{1.0, 0.2, -0.1, 2.5}, 0.05);
            DGField r(mesh, k, 4);
            dg_rhs(u, pb, basis, r);
            const auto o = mean_rhs_oracle(u, pb);
            for (int cell = 0; cell < mesh.cells(); ++cell)
                for (int c = 0; c < 4; ++c)
                    CHECK(std::abs(r.mean(cell, c) - o[cell][c]) <= 1e-12 * std::max(1.0, std::abs(o[cell][c])));
        }
    }
}

TEST_CASE("time step selection") {
    const Mesh2D mesh(10, 10, -1, 1, -1, 1);
    const ProblemSpec adv = advection_problem();
    const Basis b2(2);
    const auto u2 = l2_project(adv.initial, mesh, 2, 1);
    const double rate = 2.0 / mesh.dx();

    const auto cl = compute_dt(u2, adv, b2, make_limiter_cad(classic_2d({Family::P, 2}, 0.0)), 1.0, 1.0);
    CHECK(cl.active == "bp");
    CHECK(cl.dt == doctest::Approx((1.0 / 6) / rate).epsilon(1e-14));
    const auto op = compute_dt(u2, adv, b2, make_limiter_cad(ocad_p2p3(0.0)), 1.0, 1.0);
    CHECK(op.active == "linear");
    CHECK(op.dt == doctest::Approx((1.0 / 5) / rate).epsilon(1e-14));

    const Basis b4(4);
    const auto u4 = l2_project(adv.initial, mesh, 4, 1);
    const auto c4 = compute_dt(u4, adv, b4, make_limiter_cad(classic_2d({Family::P, 4}, 0.0)), 0.5, 1.0);
    const auto o4 = compute_dt(u4, adv, b4, make_limiter_cad(ocad_p4p5(0.0)), 0.5, 1.0);
    CHECK(c4.active == "bp");
    CHECK(o4.active == "bp");
    CHECK(o4.dt / c4.dt == doctest::Approx(12.0 * (2.0 - std::sqrt(14.0) / 2)).epsilon(1e-13));

    const ProblemSpec still = advection_problem(0.0, 0.0);
    const auto z = compute_dt(u2, still, b2, make_limiter_cad(ocad_p2p3(0.0)), 1.0, 1.0, 0.01);
    CHECK(z.active == "cap");
    CHECK(z.dt == 0.01);
}

TEST_CASE("scalar limiter") {
    const Basis basis(3);
    const Mesh2D mesh(6, 6, -1, 1, -1, 1);
    const auto lc = make_limiter_cad(ocad_p2p3(0.0, 3));
    std::mt19937_64 rng(31);

    DGField calm = random_field(mesh, 3, 1, rng, State{0, 0, 0, 0}, 0.1);
    const DGField calm0 = calm;
    for (auto mode : {LimiterMode::full, LimiterMode::simplified}) {
        const auto st = bp_limit_scalar(calm, basis, lc, -1.0, 1.0, mode);
        CHECK(st.limited_cells == 0);
        CHECK(max_diff(calm, calm0) == 0.0);
    }

    for (auto mode : {LimiterMode::full, LimiterMode::simplified}) {
        DGField wild = random_field(mesh, 3, 1, rng, State{0, 0, 0, 0}, 0.95);
        for (auto& v : wild.c) v *= 1.0;
        for (int cell = 0; cell < mesh.cells(); ++cell)
            for (int a = 1; a < wild.nb; ++a) wild.coeffs(cell, 0)[a] *= 5.0;
        const DGField before = wild;
        const auto st = bp_limit_scalar(wild, basis, lc, -1.0, 1.0, mode);
        CHECK(st.limited_cells > 0);
        for (int cell = 0; cell < mesh.cells(); ++cell) CHECK(wild.mean(cell, 0) == before.mean(cell, 0));
        CHECK(st.min_check >= -1.0 - 1e-12);
        CHECK(st.max_check <= 1.0 + 1e-12);
        if (mode == LimiterMode::full) {
            const auto [lo, hi] = check_range(wild, basis, lc);
            CHECK(lo >= -1.0 - 1e-12);
            CHECK(hi <= 1.0 + 1e-12);
        } else {
            // The recovered internal part stays in range too.
            for (int cell = 0; cell < mesh.cells(); ++cell) {
                const double pi = internal_part(wild, cell, basis, lc)[0];
                CHECK(pi >= -1.0 - 1e-12);
                CHECK(pi <= 1.0 + 1e-12);
            }
        }
    }

    DGField bad = calm;
    bad.coeffs(3, 0)[0] = 1.5;
    CHECK_THROWS_AS(bp_limit_scalar(bad, basis, lc, -1.0, 1.0, LimiterMode::simplified), NumericError);
}

TEST_CASE("internal part reproduces the CAD") {
    // For a polynomial in the CAD's space, Pi equals the weighted mean of the internal nodes.
    const Basis basis(4);
    const Mesh2D mesh(3, 3, -1, 1, -1, 1);
    std::mt19937_64 rng(41);
    const auto u = random_field(mesh, 4, 1, rng, State{0, 0, 0, 0}, 0.5);
    for (double th : {-0.6, 0.0, 0.9}) {
        const auto lc = make_limiter_cad(ocad_p4p5(th));
        for (int cell = 0; cell < mesh.cells(); ++cell) {
            double nodal = 0.0;
            for (const auto& n : lc.nodes) nodal += n.weight * u.eval(cell, n.x, n.y)[0];
            CHECK(internal_part(u, cell, basis, lc)[0] == doctest::Approx(nodal / lc.internal_weight).epsilon(1e-12));
        }
    }
}

TEST_CASE("Euler positivity limiter") {
    const ProblemSpec pb = periodic_euler();
    const Basis basis(2);
    const Mesh2D mesh(6, 6, -1, 1, -1, 1);
    const auto lc = make_limiter_cad(ocad_p2p3(0.0));
    DGField ok = l2_project(pb.initial, mesh, 2, 4);
    const DGField ok0 = ok;
    CHECK(bp_limit_euler(ok, pb, basis, lc).limited_cells == 0);
    CHECK(max_diff(ok, ok0) == 0.0);

    // Steep density slope: negative at one face.
    DGField dip = ok;
    dip.coeffs(10, 0)[1] = 1.5 * dip.mean(10, 0);
    const DGField before = dip;
    const auto st = bp_limit_euler(dip, pb, basis, lc);
    CHECK(st.limited_cells >= 1);
    for (int c = 0; c < 4; ++c) CHECK(dip.mean(10, c) == before.mean(10, c));
    const double eps1 = std::min(1e-13, dip.mean(10, 0));
    for (double s : basis.fq_nodes) {
        for (const auto& v : {dip.eval(10, -1, s), dip.eval(10, 1, s), dip.eval(10, s, -1), dip.eval(10, s, 1)}) {
            CHECK(v[0] >= eps1 - 1e-15);
            CHECK(pb.internal_energy(v) > 0.0);
        }
    }

    DGField neg = ok;
    neg.coeffs(0, 0)[0] = -0.1;
    CHECK_THROWS_AS(bp_limit_euler(neg, pb, basis, lc), NumericError);
}

TEST_CASE("TVB limiter") {
    const ProblemSpec pb = periodic_euler();
    const Mesh2D mesh(10, 10, -1, 1, -1, 1);
    DGField smooth = l2_project(pb.initial, mesh, 2, 4);
    const DGField s0 = smooth;
    CHECK(tvb_limit(smooth, pb, 1e6) == 0);
    CHECK(max_diff(smooth, s0) == 0.0);

    DGField jump = l2_project(
        [](double x, double) {
            State s{};
            s[0] = x < 0.05 ? 1.0 : 0.2;
            s[3] = x < 0.05 ? 2.5 : 0.5;
            return s;
        },
        mesh, 2, 4);
    const DGField j0 = jump;
    CHECK(tvb_limit(jump, pb, 10.0) > 0);
    for (int cell = 0; cell < mesh.cells(); ++cell)
        for (int c = 0; c < 4; ++c) CHECK(jump.mean(cell, c) == j0.mean(cell, c));
}

TEST_CASE("RK3 step basics") {
    const ProblemSpec adv = advection_problem();
    const Basis basis(2);
    const Mesh2D mesh(8, 8, -1, 1, -1, 1);
    const auto lc = make_limiter_cad(ocad_p2p3(0.0));
    DGField c = l2_project([](double, double) { return State{0.25, 0, 0, 0}; }, mesh, 2, 1);
    const DGField c0 = c;
    ssp_rk3_step(c, adv, basis, lc, 0.01, {});
    CHECK(max_diff(c, c0) <= 1e-15);

    // Temporal order on a fixed mesh: compare against a fine-step reference.
    const StepControl none{LimiterMode::none, false, 10.0};
    auto run = [&](int steps) {
        DGField u = l2_project(adv.initial, mesh, 2, 1);
        const double dt = 0.2 / steps;
        for (int s = 0; s < steps; ++s) ssp_rk3_step(u, adv, basis, lc, dt, none);
        return u;
    };
    const DGField ref = run(640);
    const double e1 = max_diff(run(20), ref), e2 = max_diff(run(40), ref);
    CHECK(std::log2(e1 / e2) == doctest::Approx(3.0).epsilon(0.05));

    DGField nan = c0;
    nan.coeffs(5, 0)[2] = std::nan("");
    CHECK_THROWS_AS(ssp_rk3_step(nan, adv, basis, lc, 0.01, none), NumericError);
}

TEST_CASE("Burgers keeps the maximum principle over 1000 steps") {
    const ProblemSpec pb = burgers_problem();
    const Basis basis(2);
    const Mesh2D mesh(16, 16, -1, 1, -1, 1);
    DGField u = l2_project(pb.initial, mesh, 2, 1);
    const auto a0 = max_wave_speeds(u, pb, basis);
    const auto lc = make_limiter_cad(ocad_p2p3(theta_of(a0[0], a0[1], mesh.dx(), mesh.dy())));
    const StepControl ctl{};
    apply_limiters(u, pb, basis, lc, ctl);
    const double mass0 = total_mean(u);
    double lo = 1, hi = -1;
    for (int s = 0; s < 1000; ++s) {
        const auto d = compute_dt(u, pb, basis, lc, 1.0, 1.0);
        ssp_rk3_step(u, pb, basis, lc, d.dt, ctl);
        for (int cell = 0; cell < mesh.cells(); ++cell) {
            lo = std::min(lo, u.mean(cell, 0));
            hi = std::max(hi, u.mean(cell, 0));
        }
        if ((s + 1) % 100 == 0) {
            CHECK(std::abs(total_mean(u) - mass0) <= 1e-11);
        }
    }
    CHECK(lo >= -1.0 - 1e-12);
    CHECK(hi <= 1.0 + 1e-12);
}

TEST_CASE("conservation across scheme variants") {
    const Mesh2D mesh(12, 12, -1, 1, -1, 1);
    struct Variant {
        ProblemSpec pb;
        StepControl ctl;
    };
    const std::vector<Variant> vs = {{advection_problem(), {LimiterMode::full, false, 10}},
                                     {advection_problem(), {LimiterMode::simplified, true, 1.0}},
                                     {burgers_problem(), {LimiterMode::none, false, 10}},
                                     {burgers_problem(), {LimiterMode::simplified, true, 0.0}},
                                     {periodic_euler(), {LimiterMode::simplified, true, 10}}};
    for (const auto& v : vs) {
        const Basis basis(3);
        DGField u = l2_project(v.pb.initial, mesh, 3, v.pb.m);
        const auto lc = make_limiter_cad(ocad_p2p3(0.0, 3));
        std::vector<double> m0(v.pb.m);
        for (int c = 0; c < v.pb.m; ++c) m0[c] = total_mean(u, c);
        for (int s = 0; s < 100; ++s) {
            const auto d = compute_dt(u, v.pb, basis, lc, 1.0, 0.5);
            ssp_rk3_step(u, v.pb, basis, lc, d.dt, v.ctl);
        }
        for (int c = 0; c < v.pb.m; ++c) CHECK(std::abs(total_mean(u, c) - m0[c]) <= 1e-11 * std::max(1.0, std::abs(m0[c])));
    }
}

TEST_CASE("CAD choice does not change a smooth run at a fixed step") {
    ProblemSpec pb = advection_problem();
    pb.initial = [](double x, double y) { return State{0.5 * std::sin(kPi * (x + y)), 0, 0, 0}; };
    const Basis basis(4);
    const Mesh2D mesh(8, 8, -1, 1, -1, 1);
    const SymmetricCAD cads[] = {classic_2d({Family::P, 4}, 0.0), ocad_p4p5(0.0), quasi_optimal(4, 0.0)};
    double dt = 1e300;
    const DGField u0 = l2_project(pb.initial, mesh, 4, 1);
    for (const auto& c : cads) dt = std::min(dt, compute_dt(u0, pb, basis, make_limiter_cad(c), 1.0, 1.0).dt);
    std::vector<DGField> out;
    for (const auto& c : cads) {
        DGField u = u0;
        const auto lc = make_limiter_cad(c);
        int limited = 0;
        for (int s = 0; s < 30; ++s) limited += ssp_rk3_step(u, pb, basis, lc, dt, {}).limited_cells;
        CHECK(limited == 0);
        out.push_back(u);
    }
    CHECK(max_diff(out[0], out[1]) <= 1e-12);
    CHECK(max_diff(out[0], out[2]) <= 1e-12);
}

TEST_CASE("results do not depend on the worker count") {
    const ProblemSpec pb = burgers_problem();
    const Basis basis(2);
    const Mesh2D mesh(24, 24, -1, 1, -1, 1);
    const auto lc = make_limiter_cad(ocad_p2p3(0.0));
    auto run = [&] {
        DGField u = l2_project(pb.initial, mesh, 2, 1);
        for (int s = 0; s < 20; ++s) ssp_rk3_step(u, pb, basis, lc, compute_dt(u, pb, basis, lc, 1, 1).dt, {});
        return u;
    };
    ::setenv("OCAD_THREADS", "1", 1);
    const DGField a = run();
    ::setenv("OCAD_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    const DGField b = run();
    ::unsetenv("OCAD_THREADS");
    CHECK(a.c == b.c);
}

TEST_CASE("advection convergence, short run") {
    RunConfig cfg;
    cfg.kind = ProblemKind::advection;
    cfg.k = 1;
    cfg.N = {8, 16, 32};
    cfg.t_end = 0.1;
    const auto res = run_case(cfg);
    REQUIRE(res.rows.size() == 3);
    CHECK(res.rows[2].order > 1.8);
    CHECK(res.rows[1].l2_error < res.rows[0].l2_error);
    for (const auto& r : res.rows) CHECK(r.steps > 0);
}

TEST_CASE("run config and artifacts") {
    const auto dir = std::filesystem::temp_directory_path() / "ocad_dg_test";
    std::filesystem::create_directories(dir);
    const auto cfg_path = dir / "cfg.json";
    {
        std::ofstream f(cfg_path);
        f << R"({"problem":"burgers","k":1,"N":[8],"t_end":0.05,"out_dir":")" << (dir / "out").string()
          << R"(","dump_fields":true})";
    }
    const auto cfg = load_run_config(cfg_path.string());
    CHECK(cfg.kind == ProblemKind::burgers);
    CHECK(cfg.N == std::vector<int>{8});
    const auto res = run_case(cfg);
    CHECK(std::filesystem::exists(dir / "out" / "errors.csv"));
    CHECK(std::filesystem::exists(dir / "out" / "field_8.csv"));
    CHECK(res.rows[0].min_mean >= -1.0);
    CHECK(res.rows[0].max_mean <= 1.0);

    {
        std::ofstream f(cfg_path);
        f << R"({"problem":"plasma"})";
    }
    CHECK_THROWS_AS(load_run_config(cfg_path.string()), std::invalid_argument);
    {
        std::ofstream f(cfg_path);
        f << R"({"problem":"advection","limiter":"sometimes"})";
    }
    CHECK_THROWS_AS(load_run_config(cfg_path.string()), std::invalid_argument);
    std::filesystem::remove_all(dir);
}
