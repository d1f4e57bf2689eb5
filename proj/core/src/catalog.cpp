#include "ocad/catalog.hpp"

#include <cmath>
#include <stdexcept>

#include "ocad/constructors.hpp"
#include "ocad/quadrature.hpp"

namespace ocad {

CadKind cad_kind_from_string(const std::string& s) {
    if (s == "classic") return CadKind::classic;
    if (s == "optimal") return CadKind::optimal;
    if (s == "quasi") return CadKind::quasi;
    throw std::invalid_argument("unknown CAD kind '" + s + "' (classic|optimal|quasi)");
}

std::string to_string(CadKind kind) {
    switch (kind) {
        case CadKind::classic: return "classic";
        case CadKind::optimal: return "optimal";
        case CadKind::quasi: return "quasi";
    }
    return "?";
}

SymmetricCAD build_cad(const SpaceId& space, double theta, CadKind kind, const SolverOptions& opt) {
    if (!(theta >= -1.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [-1,1]");
    const int k = space.degree;
    if (space.family == Family::Q) {
        if (k < 1 || k > 20) throw std::invalid_argument("Q^k supported for 1 <= k <= 20");
        if (kind == CadKind::quasi) {
            throw std::invalid_argument("quasi CADs are defined for P^k only; for Q^k use classic or optimal (identical)");
        }
        if (kind == CadKind::classic) return classic_2d(space, theta);
        return ocad_qk(k, theta).cad;
    }
    if (kind == CadKind::classic) {
        if (k < 1 || k > 20) throw std::invalid_argument("classic P^k supported for 1 <= k <= 20");
        return classic_2d(space, theta);
    }
    if (k < 1 || k > 9) {
        throw std::invalid_argument(to_string(kind) + " P^k supported for 1 <= k <= 9; use classic for larger k");
    }
    if (kind == CadKind::optimal) return optimal_cad(k, theta, opt);
    if (k <= 7) return quasi_optimal(k, theta);
    return quasi_optimal(k, theta, optimal_cad(k, 0.0, opt));
}

double optimal_wbar(int k, double theta) {
    if (k <= 7) return ocad_pk(k, theta).boundary_weight;
    return phi_star_sq({Family::P, k}, theta).value;
}

std::vector<Table1Row> table1(int kmax) {
    std::vector<Table1Row> rows;
    for (int k = 1; k <= kmax; ++k) {
        const QuadRule1D gl = gauss_lobatto(lobatto_L_for_degree(k));
        rows.push_back({k, 1.0 / (2.0 * k + 1.0), gl.weights.front(), optimal_wbar(k, 0.0)});
    }
    return rows;
}

std::vector<RatioRow> ratio_sweep(int k, const std::vector<double>& thetas) {
    if (k < 1 || k > 9) throw std::invalid_argument("ratio_sweep: 1 <= k <= 9");
    const double wgl = gauss_lobatto(lobatto_L_for_degree(k)).weights.front();
    const double w0 = optimal_wbar(k, 0.0);
    std::vector<RatioRow> rows;
    for (double t : thetas) {
        const double w = optimal_wbar(k, t);
        rows.push_back({t, w, wgl / w, quasi_optimal_wbar(w0, wgl, t) / w});
    }
    return rows;
}

std::vector<double> theta_grid(int intervals) {
    std::vector<double> g;
    for (int i = 0; i <= intervals; ++i) g.push_back(-1.0 + 2.0 * i / intervals);
    return g;
}

}  // namespace ocad
