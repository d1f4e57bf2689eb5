#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ocad/cad.hpp"

namespace ocad::dg {

enum class Boundary { periodic, outflow, fixed_inflow };
enum class Side { xm = 0, xp = 1, ym = 2, yp = 3 };

struct Mesh2D {
    int Nx = 0, Ny = 0;
    double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
    std::array<Boundary, 4> bc{Boundary::periodic, Boundary::periodic, Boundary::periodic, Boundary::periodic};

    Mesh2D() = default;
    Mesh2D(int nx, int ny, double x0, double x1, double y0, double y1);

    double dx() const { return (x_max - x_min) / Nx; }
    double dy() const { return (y_max - y_min) / Ny; }
    double xc(int i) const { return x_min + (i + 0.5) * dx(); }
    double yc(int j) const { return y_min + (j + 0.5) * dy(); }
    int cells() const { return Nx * Ny; }
    int cell(int i, int j) const { return j * Nx + i; }
};

inline constexpr int kMaxComponents = 4;
using State = std::array<double, kMaxComponents>;

enum class ProblemKind { advection, burgers, euler };

struct ProblemSpec {
    ProblemKind kind = ProblemKind::advection;
    int m = 1;
    double gamma = 1.4;
    double ax = 1.0, ay = 1.0;  // advection velocity
    double umin = -1.0, umax = 1.0;
    State inflow{};  // ghost state for fixed_inflow sides
    std::function<State(double, double)> initial;
    std::function<State(double, double, double)> exact;  // optional

    void flux(const State& u, int dir, State& f) const;
    double speed(const State& u, int dir) const;  // max |eigenvalue| of df_dir/du
    bool admissible(const State& u) const;

    double pressure(const State& u) const;
    double internal_energy(const State& u) const;  // rho*e = E - |m|^2 / (2 rho)
};

ProblemSpec advection_problem(double ax = 1.0, double ay = 1.0);
ProblemSpec burgers_problem();
// Mach 1.1 shock at x = 0.5 hitting a strong low-density vortex on [0,2]x[0,1].
ProblemSpec shock_vortex_problem(double eps = 1.378106);
Mesh2D shock_vortex_mesh(int Nx, int Ny);

// Orthonormal tensor Legendre modes L_i(xi) L_j(eta), i + j <= k, with
// tabulated values on the volume (k+2)^2 Gauss rule and face (k+1) Gauss rule.
struct Basis {
    int k = 0;
    int nb = 0;
    std::vector<std::array<int, 2>> modes;
    std::vector<double> vq_nodes, vq_weights;  // 1D, size k+2
    std::vector<double> fq_nodes, fq_weights;  // 1D, size k+1
    std::vector<double> vol_phi, vol_dxi, vol_deta;  // [(qx*Qv+qy)*nb + a]
    std::vector<double> face_phi;                    // [((side*Qf)+q)*nb + a]

    explicit Basis(int k = 0);
    int Qv() const { return static_cast<int>(vq_nodes.size()); }
    int Qf() const { return static_cast<int>(fq_nodes.size()); }
    double eval_mode(int a, double xi, double eta) const;
};

struct DGField {
    Mesh2D mesh;
    int k = 0, m = 1, nb = 1;
    std::vector<double> c;  // [(cell*m + comp)*nb + mode]

    DGField() = default;
    DGField(const Mesh2D& mesh, int k, int m);

    double* coeffs(int cell, int comp) { return &c[(static_cast<std::size_t>(cell) * m + comp) * nb]; }
    const double* coeffs(int cell, int comp) const { return &c[(static_cast<std::size_t>(cell) * m + comp) * nb]; }
    double mean(int cell, int comp) const { return coeffs(cell, comp)[0]; }
    // Value at reference coordinates (xi, eta) in [-1,1]^2 of the cell.
    State eval(int cell, double xi, double eta) const;
};

DGField l2_project(const std::function<State(double, double)>& ic, const Mesh2D& mesh, int k, int m);

State lf_flux(const ProblemSpec& pb, const State& uL, const State& uR, int dir, double alpha);

// Limiting data derived from a CAD on the reference cell: face weights in
// the order (x-, x+, y-, y+), internal weight, and expanded internal nodes.
struct LimiterCAD {
    SymmetricCAD cad;
    std::array<double, 4> face_weight{};
    double internal_weight = 0.0;
    std::vector<Node2D> nodes;
};
LimiterCAD make_limiter_cad(const SymmetricCAD& cad);

// Global Lax-Friedrichs speeds over all face traces (and inflow states).
std::array<double, 2> max_wave_speeds(const DGField& u, const ProblemSpec& pb, const Basis& basis);

void dg_rhs(const DGField& u, const ProblemSpec& pb, const Basis& basis, DGField& out);

struct DtChoice {
    double dt = 0.0;
    double bp = 0.0;      // c0 * CAD face-weight bound
    double linear = 0.0;  // 1 / ((2k+1)(a1/dx + a2/dy))
    std::string active;   // "bp", "linear" or "cap"
};
DtChoice compute_dt(const DGField& u, const ProblemSpec& pb, const Basis& basis, const LimiterCAD& lc, double c0,
                    double cssp, double dt_max = 1.0);

enum class LimiterMode { none, full, simplified };

// Pi: the internal-node part of the CAD recovered from the mean and the traces.
State internal_part(const DGField& u, int cell, const Basis& basis, const LimiterCAD& lc);

struct LimitStats {
    int limited_cells = 0;
    double min_check = 0.0, max_check = 0.0;  // over check points after limiting
};
LimitStats bp_limit_scalar(DGField& u, const Basis& basis, const LimiterCAD& lc, double umin, double umax,
                           LimiterMode mode);
LimitStats bp_limit_euler(DGField& u, const ProblemSpec& pb, const Basis& basis, const LimiterCAD& lc);

// Componentwise TVB minmod on troubled cells; returns the number of cells touched.
int tvb_limit(DGField& u, const ProblemSpec& pb, double M);

struct StepControl {
    LimiterMode limiter = LimiterMode::simplified;
    bool tvb = false;
    double tvb_M = 10.0;
};

// TVB (if enabled) then the BP limiter. With LimiterMode::none scalar fields
// are left untouched but the check-point range is still reported.
LimitStats apply_limiters(DGField& u, const ProblemSpec& pb, const Basis& basis, const LimiterCAD& lc,
                          const StepControl& ctl);
// Shu-Osher SSP-RK3 with the limiters applied after every stage.
LimitStats ssp_rk3_step(DGField& u, const ProblemSpec& pb, const Basis& basis, const LimiterCAD& lc, double dt,
                        const StepControl& ctl);

// L2 error against pb.exact, as the root mean square over the domain.
double l2_error(const DGField& u, const ProblemSpec& pb, double t);

// ---- driver ----

struct RunConfig {
    ProblemKind kind = ProblemKind::advection;
    int k = 2;
    std::vector<int> N{20};  // Nx per run; Ny = N * ny_ratio
    double ny_ratio = 1.0;
    double t_end = 0.5;
    std::string cad = "optimal";  // classic | optimal | quasi | file:<path>
    double c0 = 1.0;
    double cssp = 1.0;
    LimiterMode limiter = LimiterMode::simplified;
    bool tvb = false;
    double tvb_M = 10.0;
    double dt_max = 1.0;
    // When > 0: dt_N = dt(N[0]) * (N[0]/N)^dt_exponent instead of the CFL rule.
    double dt_exponent = 0.0;
    bool theta_per_step = false;
    std::string out_dir;  // empty: no files
    bool dump_fields = false;
};

RunConfig load_run_config(const std::string& path);

struct RunRow {
    int N = 0;
    double l2_error = 0.0;  // NaN when no exact solution
    double order = 0.0;     // NaN on the first row
    long steps = 0;
    double wall_ms = 0.0;
    double min_mean = 0.0, max_mean = 0.0;        // over cell averages, all steps (component 0)
    double min_check = 0.0, max_check = 0.0;      // limiter check points, all steps
    double min_rho = 0.0, min_rhoe = 0.0;         // Euler only, over cell averages
    bool finite = true;
    double theta = 0.0;
    double wbar = 0.0;
    std::string dt_active;
};

struct RunResult {
    std::vector<RunRow> rows;
    std::vector<DGField> fields;  // final field per row
};

RunResult run_case(const RunConfig& cfg);

// Thread count for cell loops: OCAD_THREADS if set, else 1.
int worker_count();

}  // namespace ocad::dg
