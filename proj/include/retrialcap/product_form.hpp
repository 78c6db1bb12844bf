#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "retrialcap/errors.hpp"
#include "retrialcap/model.hpp"

namespace retrialcap {

/// Closed-form level distribution of the no-orbit (m = 0) guard-channel
/// chain, a plain birth-death process on j:
///   pi_j ∝ lambda^j / j!                                   j <= c-g
///   pi_j ∝ lambda^{c-g} lambda_h^{j-(c-g)} / j!            j >  c-g
/// Evaluated in log space to survive c up to a few hundred.
inline std::vector<double> product_form_m0(const ModelParams& params) {
  params.validate();
  if (params.m != 0)
    throw domain_error("product_form_m0 requires m = 0");

  const int c = params.c;
  const int threshold = params.threshold();
  const double log_lambda = std::log(params.lambda_total() / params.nu);
  const double log_lambda_h = std::log(params.lambda_h / params.nu);

  std::vector<double> log_pi(c + 1);
  log_pi[0] = 0.0;
  for (int j = 1; j <= c; ++j) {
    const double birth = j <= threshold ? log_lambda : log_lambda_h;
    log_pi[j] = log_pi[j - 1] + birth - std::log(static_cast<double>(j));
  }

  const double peak = *std::max_element(log_pi.begin(), log_pi.end());
  std::vector<double> pi(c + 1);
  double sum = 0.0;
  for (int j = 0; j <= c; ++j) {
    pi[j] = std::exp(log_pi[j] - peak);
    sum += pi[j];
  }
  for (double& v : pi) v /= sum;
  return pi;
}

struct ProductFormMeasures {
  double P_b = 0.0;
  double P_d = 0.0;
};

inline ProductFormMeasures product_form_m0_measures(const ModelParams& params) {
  const std::vector<double> pi = product_form_m0(params);
  ProductFormMeasures out;
  for (int j = params.threshold(); j <= params.c; ++j) out.P_b += pi[j];
  out.P_d = pi[params.c];
  return out;
}

/// Erlang-B loss probability for offered load a = lambda/nu on c servers,
/// via the standard recursion B(a,0)=1, B(a,j) = aB/(j + aB).
inline double erlang_b(double offered_load, int servers) {
  if (servers < 0 || !(offered_load > 0.0))
    throw domain_error("erlang_b: need offered_load > 0 and servers >= 0");
  double b = 1.0;
  for (int j = 1; j <= servers; ++j)
    b = offered_load * b / (j + offered_load * b);
  return b;
}

}  // namespace retrialcap
