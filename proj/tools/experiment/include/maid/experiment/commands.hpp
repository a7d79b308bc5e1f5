#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "maid/derivative_check.hpp"
#include "maid/experiment/config.hpp"

namespace maid::experiment {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,       ///< failed derivative check or a numerical failure mid-run
  kExitConfig = 2,       ///< bad config, bad arguments or missing input files
  kExitIo = 3,           ///< unreadable inputs or unwritable outputs
};

/// Tolerance every derivative discrepancy must meet for `maid check` to pass.
inline constexpr double kCheckTolerance = 1e-5;

/// Runs every sweep element of the config, writing `<label>.csv`,
/// `<label>_aux.csv` and `<label>.json` into the output directory and one
/// summary line per run to `out`.
int cmd_run(const std::filesystem::path& config_path, const Overrides& overrides,
            std::ostream& out, std::ostream& err);

/// Derivative and constant checks on a built-in instance: quadratic, tv,
/// tv-robust or logistic.
int cmd_check(const std::string& selector, std::uint64_t seed, std::ostream& out,
              std::ostream& err);

/// Prints one line per check and returns kExitOk or kExitFailed; failing
/// lines name the operation.
int report_check(const DerivativeReport& report, std::ostream& out);

/// Denoises one PGM with a fixed θ; `overrides.out` replaces the output path.
int cmd_denoise(const std::filesystem::path& config_path, const Overrides& overrides,
                std::ostream& out, std::ostream& err);

}  // namespace maid::experiment
