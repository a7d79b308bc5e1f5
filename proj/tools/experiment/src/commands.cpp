#include "maid/experiment/commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "maid/experiment/instance.hpp"
#include "maid/experiment/trace.hpp"
#include "maid/fista.hpp"
#include "maid/image.hpp"
#include "maid/io/pgm.hpp"
#include "maid/problems/logistic.hpp"
#include "maid/random.hpp"
#include "maid/version.hpp"

namespace maid::experiment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

json run_metadata(const RunConfig& config, const RunSpec& run, const Instance& inst,
                  const MaidResult& result, double wall_seconds) {
  json meta;
  meta["version"] = kVersion;
  meta["config"] = to_json(config);
  meta["run"] = {{"label", run.label},
                 {"eps0", run.maid.eps0},
                 {"delta0", run.maid.delta0},
                 {"fixed_accuracy", run.maid.fixed_accuracy},
                 {"budget", run.maid.budget_cap ? json(*run.maid.budget_cap) : json(nullptr)}};
  meta["seeds"] = {{"root", config.seed},
                   {"data", inst.data_seed},
                   {"maid_run", derive_seed(run.maid.seed, "maid_run")}};
  meta["stop_reason"] = to_string(result.stop_reason);
  meta["iterations"] = result.records.size();
  meta["total_cost"] = result.total_cost;
  meta["wall_time_seconds"] = wall_seconds;
  meta["theta0"] = to_std(inst.theta0);
  meta["theta_final"] = to_std(result.theta);
  meta["lipschitz"] = {{"L_Hinv", result.lips.L_Hinv_max},
                       {"L_J", result.lips.L_J_max},
                       {"L_upper_grad", result.lips.L_upper_grad}};
  meta["files"] = {{"trace", run.label + ".csv"}, {"aux", run.label + "_aux.csv"}};
  return meta;
}

// Fixed evaluation points for `maid check`: a random θ and a perturbed state.
struct CheckPoint {
  ParamVector theta;
  StateVector x;
};

CheckPoint check_point(const Instance& inst, const std::string& selector, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "check_point"));
  CheckPoint p;
  if (selector == "quadratic") {
    p.theta = standard_normal(inst.problem->dims().d, rng);
  } else if (selector == "logistic") {
    p.theta = 0.5 * standard_normal(inst.problem->dims().d, rng);
  } else {
    p.theta = ParamVector(2);
    p.theta << -1.5, -2.5;
    p.theta += 0.1 * standard_normal(2, rng);
  }
  p.x = inst.problem->initial_state(p.theta) + 0.1 * standard_normal(inst.problem->dims().n, rng);
  return p;
}

}  // namespace

int cmd_run(const fs::path& config_path, const Overrides& overrides, std::ostream& out,
            std::ostream& err) {
  try {
    RunConfig config = load_run_config(config_path);
    apply_overrides(config, overrides);
    const std::vector<RunSpec> runs = expand_sweep(config);
    for (const RunSpec& run : runs) run.maid.validate();
    const Instance inst = build_instance(config.problem, config.seed, config.theta0);

    std::error_code ec;
    fs::create_directories(config.output, ec);
    if (ec) throw IoError("cannot create " + config.output.string() + ": " + ec.message());

    for (const RunSpec& run : runs) {
      const auto start = std::chrono::steady_clock::now();
      const MaidResult result = maid_run(*inst.problem, inst.theta0, run.maid);
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      const fs::path trace_path = config.output / (run.label + ".csv");
      const fs::path aux_path = config.output / (run.label + "_aux.csv");
      const fs::path meta_path = config.output / (run.label + ".json");
      std::ofstream trace = open_output(trace_path);
      write_trace(trace, result);
      close_output(trace, trace_path);
      std::ofstream aux = open_output(aux_path);
      write_aux_trace(aux, result);
      close_output(aux, aux_path);
      std::ofstream meta = open_output(meta_path);
      meta << run_metadata(config, run, inst, result, seconds).dump(2) << '\n';
      close_output(meta, meta_path);

      // The final record may have stopped mid-solve; report the last computed z.
      double f_upper = 0.0;
      double z_norm = 0.0;
      for (auto it = result.records.rbegin(); it != result.records.rend(); ++it) {
        if (it->z_norm > 0.0) {
          f_upper = it->f_upper_bound;
          z_norm = it->z_norm;
          break;
        }
      }
      out << run.label << ": stop=" << to_string(result.stop_reason)
          << " iterations=" << result.records.size() << " cost=" << result.total_cost
          << " f_upper=" << format_number(f_upper)
          << " z_norm=" << format_number(z_norm) << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}

int report_check(const DerivativeReport& report, std::ostream& out) {
  const std::pair<const char*, double> checks[] = {
      {"lower_grad", report.lower_grad},   {"lower_hvp", report.lower_hvp},
      {"hvp_symmetry", report.hvp_symmetry}, {"mixed_jvp", report.mixed_jvp},
      {"mixed_adjoint", report.mixed_adjoint}, {"upper_grad", report.upper_grad},
  };
  bool ok = true;
  for (const auto& [name, error] : checks) {
    const bool pass = error <= kCheckTolerance;
    ok = ok && pass;
    out << (pass ? "ok   " : "FAIL ") << name << " max_rel_error=" << format_number(error) << '\n';
  }
  const bool constants = report.constants_consistent();
  ok = ok && constants;
  out << (constants ? "ok   " : "FAIL ") << "constants mu=" << format_number(report.mu)
      << " rayleigh=[" << format_number(report.rayleigh_min) << ", "
      << format_number(report.rayleigh_max) << "] L=" << format_number(report.lip) << '\n';
  return ok ? kExitOk : kExitFailed;
}

int cmd_check(const std::string& selector, std::uint64_t seed, std::ostream& out,
              std::ostream& err) {
  ProblemConfig config;
  if (selector == "quadratic") {
    config.type = "quadratic";
  } else if (selector == "tv" || selector == "tv-robust") {
    config.type = "tv";
    config.width = 16;
    config.height = 16;
    config.count = 2;
    config.robust = selector == "tv-robust";
  } else if (selector == "logistic") {
    config.type = "logistic";
    config.samples = 60;
    config.val_samples = 40;
    config.features = 4;
  } else {
    err << "error: unknown problem '" << selector << "' (quadratic, tv, tv-robust, logistic)\n";
    return kExitConfig;
  }
  try {
    const Instance inst = build_instance(config, seed);
    const CheckPoint p = check_point(inst, selector, seed);
    out << "checking " << selector << " (seed " << seed << ")\n";
    const DerivativeReport report =
        check_derivatives(*inst.problem, p.theta, p.x, 5, derive_seed(seed, "check_directions"));
    return report_check(report, out);
  } catch (const NumericalError& e) {
    out << "FAIL " << e.what() << '\n';
    return kExitFailed;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_denoise(const fs::path& config_path, const Overrides& overrides, std::ostream& out,
                std::ostream& err) {
  try {
    DenoiseConfig config = load_denoise_config(config_path);
    if (overrides.out) config.output = *overrides.out;

    ParamVector theta(2);
    if (config.theta) {
      theta << (*config.theta)[0], (*config.theta)[1];
    } else {
      std::ifstream in(config.theta_from);
      if (!in) throw ConfigError("missing theta file " + config.theta_from.string());
      json meta;
      try {
        meta = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError("theta file " + config.theta_from.string() + ": " + e.what());
      }
      if (!meta.contains("theta_final") || !meta["theta_final"].is_array() ||
          meta["theta_final"].size() != 2) {
        throw ConfigError("theta file " + config.theta_from.string() +
                          " has no two-entry theta_final");
      }
      theta << meta["theta_final"][0].get<double>(), meta["theta_final"][1].get<double>();
    }
    require_finite(theta, "denoise theta");

    if (!fs::is_regular_file(config.input)) throw ConfigError("missing input image " + config.input.string());
    if (!config.reference.empty() && !fs::is_regular_file(config.reference)) {
      throw ConfigError("missing reference image " + config.reference.string());
    }
    const Image input = io::read_pgm(config.input);
    const Image reference = config.reference.empty() ? input : io::read_pgm(config.reference);
    if (reference.width != input.width || reference.height != input.height) {
      throw ConfigError("reference and input image sizes differ");
    }

    const TVDenoise problem({input}, {reference});
    Budget unlimited(std::nullopt);
    const LowerState solved = fista_solve(problem, theta, problem.noisy(), config.eps, unlimited, {});
    Image output = problem.unstack(solved.x_tilde).front();
    io::write_pgm(config.output, output);

    out << "theta=(" << format_number(theta[0]) << ", " << format_number(theta[1]) << ")"
        << " iterations=" << solved.iterations_used << " status=" << to_string(solved.status) << '\n';
    out << "wrote " << config.output.string() << '\n';
    out << "psnr_output_vs_input=" << format_number(psnr(output.pixels, input.pixels)) << '\n';
    if (!config.reference.empty()) {
      out << "psnr_input_vs_reference=" << format_number(psnr(input.pixels, reference.pixels)) << '\n';
      out << "psnr_output_vs_reference=" << format_number(psnr(output.pixels, reference.pixels)) << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace maid::experiment
