#include "isildpc/jfunction.hpp"

#include <cmath>
#include <stdexcept>

#include "isildpc/interp.hpp"
#include "isildpc/logmath.hpp"

namespace isildpc {

GaussHermite gauss_hermite(int n) {
  if (n < 2) throw std::invalid_argument("gauss_hermite: n >= 2 required");
  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  const double pi_quarter = 0.7511255444649425;  // pi^(-1/4)
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // asymptotic initial guesses, then Newton on the recurrence
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * gh.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * gh.nodes[1];
    else
      z = 2.0 * z - gh.nodes[i - 2];
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pi_quarter;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    gh.nodes[i] = z;
    gh.nodes[n - 1 - i] = -z;
    gh.weights[i] = 2.0 / (pp * pp);
    gh.weights[n - 1 - i] = gh.weights[i];
  }
  return gh;
}

namespace {

constexpr int kGhN = 64;
constexpr double kInvSqrtPi = 0.5641895835477563;

double j_quadrature(double sigma, const GaussHermite& gh) {
  if (sigma <= 0.0) return 0.0;
  const double mu = 0.5 * sigma * sigma;
  const double scale = std::sqrt(2.0) * sigma;
  double acc = 0.0;
  for (int i = 0; i < kGhN; ++i) acc += gh.weights[i] * softplus2(mu + scale * gh.nodes[i]);
  double v = 1.0 - kInvSqrtPi * acc;
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

struct JTable {
  GaussHermite gh;
  MonotoneCubic forward;   // sigma -> mi on [0, kJSigmaCap]
  MonotoneCubic inverse;   // mi -> sigma, knots dense where J is steep
  double mi_cap = 1.0;     // largest mi the inverse table resolves
  double sigma_at_cap = kJSigmaCap;

  JTable() : gh(gauss_hermite(kGhN)) {
    const int knots = 16384;
    std::vector<double> sig(knots + 1), mi(knots + 1);
    for (int k = 0; k <= knots; ++k) {
      sig[k] = kJSigmaCap * k / knots;
      mi[k] = j_quadrature(sig[k], gh);
    }
    forward = MonotoneCubic(sig, mi);
    // inverse knots stop where J saturates to within 1e-12 of one
    int keep = 1;
    for (int k = 1; k <= knots; ++k) {
      if (mi[k] <= mi[keep - 1]) break;
      keep = k + 1;
      if (mi[k] >= 1.0 - 1e-12) break;
    }
    std::vector<double> mi_knots(mi.begin(), mi.begin() + keep);
    std::vector<double> sig_knots(sig.begin(), sig.begin() + keep);
    mi_cap = mi_knots.back();
    sigma_at_cap = sig_knots.back();
    inverse = MonotoneCubic(std::move(mi_knots), std::move(sig_knots));
  }
};

const JTable& jtable() {
  static const JTable table;
  return table;
}

}  // namespace

double j_fun(double sigma) { return j_quadrature(sigma, jtable().gh); }

double j_fun_table(double sigma) {
  const auto& t = jtable();
  if (sigma <= 0.0) return 0.0;
  if (sigma >= kJSigmaCap) return 1.0;
  double v = t.forward(sigma);
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double j_inv(double mi) {
  const auto& t = jtable();
  if (mi <= 0.0) return 0.0;
  if (mi >= t.mi_cap) return t.sigma_at_cap;
  double v = t.inverse(mi);
  return v < 0.0 ? 0.0 : v;
}

}  // namespace isildpc
