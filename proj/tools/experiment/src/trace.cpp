#include "maid/experiment/trace.hpp"

#include <cstdio>
#include <ostream>

namespace maid::experiment {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace(std::ostream& out, const MaidResult& result) {
  out << kTraceHeader << '\n';
  for (const IterationRecord& r : result.records) {
    out << r.k << ',' << format_number(r.g_inexact) << ',' << format_number(r.f_lower_bound) << ','
        << format_number(r.f_upper_bound) << ',' << format_number(r.eps) << ','
        << format_number(r.delta) << ',' << format_number(r.alpha) << ','
        << format_number(r.z_norm) << ',' << format_number(r.omega) << ',' << r.ll_iters << ','
        << r.cg_iters << ',' << r.cumulative_cost << ',' << r.bt_attempts << ','
        << to_string(r.outcome) << '\n';
  }
}

void write_aux_trace(std::ostream& out, const MaidResult& result) {
  const Eigen::Index d = result.theta.size();
  out << "k,psi,upper_trial,eps_start,alpha_start";
  for (Eigen::Index i = 0; i < d; ++i) out << ",theta_" << i;
  out << '\n';
  for (const IterationRecord& r : result.records) {
    out << r.k << ',' << format_number(r.psi) << ',' << format_number(r.upper_trial) << ','
        << format_number(r.eps_start) << ',' << format_number(r.alpha_start);
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << format_number(r.theta[i]);
    out << '\n';
  }
}

}  // namespace maid::experiment
