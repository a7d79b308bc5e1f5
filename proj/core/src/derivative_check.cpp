#include "maid/derivative_check.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "maid/random.hpp"

namespace maid {
namespace {

double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1.0});
}

template <typename T>
T checked(T value, const char* what) {
  require_finite(value, what);
  return value;
}

}  // namespace

double DerivativeReport::max_error() const {
  return std::max({lower_grad, lower_hvp, hvp_symmetry, mixed_jvp, mixed_adjoint, upper_grad});
}

bool DerivativeReport::constants_consistent(double slack) const {
  return rayleigh_min >= mu * (1.0 - slack) && rayleigh_max <= lip * (1.0 + slack);
}

std::string DerivativeReport::worst_check() const {
  const std::array<std::pair<const char*, double>, 6> checks{{
      {"lower_grad", lower_grad},
      {"lower_hvp", lower_hvp},
      {"hvp_symmetry", hvp_symmetry},
      {"mixed_jvp", mixed_jvp},
      {"mixed_adjoint", mixed_adjoint},
      {"upper_grad", upper_grad},
  }};
  const auto* worst = std::max_element(checks.begin(), checks.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
  return worst->second > 0.0 ? worst->first : "";
}

double fd_step(const Eigen::Ref<const Eigen::VectorXd>& point) {
  const double inf_norm = point.size() == 0 ? 0.0 : point.cwiseAbs().maxCoeff();
  return 1e-6 * (1.0 + inf_norm);
}

DerivativeReport check_derivatives(const BilevelProblem& problem, const ParamVector& theta,
                                   const StateVector& x, int samples, std::uint64_t seed) {
  if (samples < 1) throw ConfigError("check_derivatives needs at least one sample");
  require_finite(x, "check_derivatives state");
  require_finite(theta, "check_derivatives parameters");

  const Dims dims = problem.dims();
  Rng rng(seed);
  DerivativeReport report;
  report.mu = problem.mu(theta);
  report.lip = problem.lip_lower(theta);
  report.rayleigh_min = std::numeric_limits<double>::infinity();
  report.rayleigh_max = 0.0;

  const double hx = fd_step(x);
  const double ht = fd_step(theta);
  const StateVector grad = checked(problem.lower_grad(x, theta), "lower_grad");
  const StateVector ugrad = checked(problem.upper_grad(x), "upper_grad");

  for (int s = 0; s < samples; ++s) {
    const StateVector v = random_unit_vector(dims.n, rng);
    const StateVector u = random_unit_vector(dims.n, rng);
    const ParamVector w = random_unit_vector(dims.d, rng);

    // (a) directional derivative of h
    const double hp = checked(problem.lower_value(x + hx * v, theta), "lower_value");
    const double hm = checked(problem.lower_value(x - hx * v, theta), "lower_value");
    report.lower_grad = std::max(report.lower_grad, rel(grad.dot(v), (hp - hm) / (2.0 * hx)));

    // (b) Hessian-vector product against differences of the gradient
    const StateVector Hv = checked(problem.lower_hvp(x, theta, v), "lower_hvp");
    const StateVector Hu = checked(problem.lower_hvp(x, theta, u), "lower_hvp");
    const StateVector gp = checked(problem.lower_grad(x + hx * v, theta), "lower_grad");
    const StateVector gm = checked(problem.lower_grad(x - hx * v, theta), "lower_grad");
    report.lower_hvp = std::max(report.lower_hvp, rel(Hv, StateVector((gp - gm) / (2.0 * hx))));
    report.hvp_symmetry = std::max(report.hvp_symmetry, rel(u.dot(Hv), v.dot(Hu)));

    const double rq = v.dot(Hv);
    report.rayleigh_min = std::min(report.rayleigh_min, rq);
    report.rayleigh_max = std::max(report.rayleigh_max, rq);

    // (c) mixed second derivative and its adjoint
    const StateVector Jw = checked(problem.mixed_jvp(x, theta, w), "mixed_jvp");
    const ParamVector Jtv = checked(problem.mixed_jvp_transpose(x, theta, v), "mixed_jvp_transpose");
    const StateVector gtp = checked(problem.lower_grad(x, theta + ht * w), "lower_grad");
    const StateVector gtm = checked(problem.lower_grad(x, theta - ht * w), "lower_grad");
    report.mixed_jvp = std::max(report.mixed_jvp, rel(Jw, StateVector((gtp - gtm) / (2.0 * ht))));
    report.mixed_adjoint = std::max(report.mixed_adjoint, rel(v.dot(Jw), w.dot(Jtv)));

    // (d) upper-level gradient
    const double up = checked(problem.upper_value(x + hx * v), "upper_value");
    const double um = checked(problem.upper_value(x - hx * v), "upper_value");
    report.upper_grad = std::max(report.upper_grad, rel(ugrad.dot(v), (up - um) / (2.0 * hx)));
  }
  return report;
}

}  // namespace maid
