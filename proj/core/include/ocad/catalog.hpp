#pragma once

#include <string>
#include <vector>

#include "ocad/cad.hpp"
#include "ocad/optimizer.hpp"

namespace ocad {

enum class CadKind { classic, optimal, quasi };

CadKind cad_kind_from_string(const std::string& s);
std::string to_string(CadKind kind);

// One entry point for every supported (space, kind) pair. Optimal P^k for
// k = 8, 9 runs the numeric continuation. Throws std::invalid_argument with
// the supported alternatives otherwise.
SymmetricCAD build_cad(const SpaceId& space, double theta, CadKind kind, const SolverOptions& opt = {});

// Optimal boundary weight at theta for P^k: closed form for k <= 7, the
// eigenvalue route above that.
double optimal_wbar(int k, double theta);

struct Table1Row {
    int k;
    double linear;   // 1/(2k+1)
    double classic;  // Gauss-Lobatto end weight
    double optimal;  // optimal wbar at theta = 0
};
std::vector<Table1Row> table1(int kmax = 9);

struct RatioRow {
    double theta;
    double optimal;
    double classic_ratio;
    double quasi_ratio;
};
std::vector<RatioRow> ratio_sweep(int k, const std::vector<double>& thetas);

// -1, -0.9, ..., 1 with exact endpoints.
std::vector<double> theta_grid(int intervals = 20);

}  // namespace ocad
