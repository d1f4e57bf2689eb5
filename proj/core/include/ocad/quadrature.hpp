#pragma once

#include <vector>

namespace ocad {

// 1D rule on [-1,1] with weights normalized to sum to one, so that
// sum_i w_i f(x_i) approximates (1/2) * integral of f. Multiply by 2 for the
// raw measure.
struct QuadRule1D {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // positive
    int exact_degree = 0;

    std::size_t size() const { return nodes.size(); }
};

// Q-point Gauss-Legendre rule, exact to degree 2Q-1.
QuadRule1D gauss(int Q);

// L-point Gauss-Lobatto rule including +-1, exact to degree 2L-3.
// Endpoint weights are 1/(L(L-1)).
QuadRule1D gauss_lobatto(int L);

// ceil((k+3)/2): the smallest Lobatto rule exact on degree k.
int lobatto_L_for_degree(int k);

}  // namespace ocad
