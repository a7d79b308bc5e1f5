#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "maid/maid.hpp"

namespace maid::experiment {

inline constexpr const char* kTraceHeader =
    "k,g_inexact,f_lower,f_upper,eps,delta,alpha,z_norm,omega,ll_iters,cg_iters,cum_cost,"
    "bt_attempts,outcome";

/// Shortest round-trip decimal form ("%.17g"); traces must replay bit for bit.
std::string format_number(double value);

/// One row per record under kTraceHeader.
void write_trace(std::ostream& out, const MaidResult& result);

/// Companion table holding what the main trace leaves out: ψ and its upper
/// term, the iteration's starting ε and α, and θ_k itself.
void write_aux_trace(std::ostream& out, const MaidResult& result);

}  // namespace maid::experiment
