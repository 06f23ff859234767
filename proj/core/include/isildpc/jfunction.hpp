#pragma once

#include <vector>

namespace isildpc {

// Gauss-Hermite nodes and weights for weight function exp(-x^2).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

// J(sigma): mutual information between a bit and a consistent-Gaussian LLR
// N(+-sigma^2/2, sigma^2). Evaluated by 64-node Gauss-Hermite quadrature.
double j_fun(double sigma);

// Inverse of J via a precomputed monotone cubic table. mi >= j_fun(kJSigmaCap)
// maps to the finite cap kJSigmaCap.
double j_inv(double mi);

// Table-backed J for hot loops; matches j_fun to ~1e-9.
double j_fun_table(double sigma);

inline constexpr double kJSigmaCap = 25.0;

}  // namespace isildpc
