#include "maid/experiment/config.hpp"

#include <fstream>
#include <set>

namespace maid::experiment {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Reads typed keys out of one JSON object and rejects whatever is left over.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail("", "must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!obj_.contains(key)) return;
    seen_.insert(key);
    out = convert<T>(obj_.at(key), key);
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& out) {
    if (!obj_.contains(key) || obj_.at(key).is_null()) {
      if (obj_.contains(key)) seen_.insert(key);
      return;
    }
    seen_.insert(key);
    out = convert<T>(obj_.at(key), key);
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(obj_.at(key), qualified(key));
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("config: " + qualified(key) + ": " + what);
  }

 private:
  std::string qualified(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class T>
  T convert(const json& v, const std::string& key) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(key, "expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(key, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, fs::path>) {
      if (!v.is_string()) fail(key, "expected a path string");
      return fs::path(v.get<std::string>());
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        // 1.5e5 style budgets are common; accept floats that are whole numbers.
        if (!v.is_number_float() || v.get<double>() != static_cast<double>(static_cast<T>(v.get<double>()))) {
          fail(key, "expected an integer");
        }
        return static_cast<T>(v.get<double>());
      }
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(key, "expected a number");
      return v.get<T>();
    } else {
      // std::vector<element>
      if (!v.is_array()) fail(key, "expected an array");
      T out;
      for (const json& e : v) out.push_back(convert<typename T::value_type>(e, key));
      return out;
    }
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

const std::set<std::string> kQuadraticKeys{"rows", "n", "d", "noise"};
const std::set<std::string> kTvKeys{"width", "height", "count", "sigma", "images", "clean", "robust"};
const std::set<std::string> kLogisticKeys{"samples", "val_samples", "features", "classes",
                                          "separation", "train_csv", "val_csv"};

ProblemConfig parse_problem(Section s, const fs::path& base) {
  ProblemConfig p;
  s.read("type", p.type);
  s.read("seed", p.data_seed);
  const std::set<std::string>* own = nullptr;
  if (p.type == "quadratic") {
    own = &kQuadraticKeys;
    s.read("rows", p.rows);
    s.read("n", p.n);
    s.read("d", p.d);
    s.read("noise", p.noise);
    if (p.n < 1 || p.d < 1 || p.rows < std::max(p.n, p.d)) s.fail("rows", "need rows >= max(n, d) >= 1");
    if (!(p.noise >= 0.0)) s.fail("noise", "must be non-negative");
  } else if (p.type == "tv") {
    own = &kTvKeys;
    s.read("width", p.width);
    s.read("height", p.height);
    s.read("count", p.count);
    s.read("sigma", p.sigma);
    s.read("images", p.images);
    s.read("clean", p.clean);
    s.read("robust", p.robust);
    for (auto& f : p.images) f = resolve(f, base);
    for (auto& f : p.clean) f = resolve(f, base);
    if (p.images.size() != p.clean.size()) s.fail("clean", "needs one reference per image");
    if (p.images.empty() && (p.width < 8 || p.height < 8 || p.count < 1)) {
      s.fail("width", "synthetic images need width, height >= 8 and count >= 1");
    }
    if (!(p.sigma >= 0.0)) s.fail("sigma", "must be non-negative");
  } else if (p.type == "logistic") {
    own = &kLogisticKeys;
    s.read("samples", p.samples);
    s.read("val_samples", p.val_samples);
    s.read("features", p.features);
    s.read("classes", p.classes);
    s.read("separation", p.separation);
    s.read("train_csv", p.train_csv);
    s.read("val_csv", p.val_csv);
    p.train_csv = resolve(p.train_csv, base);
    p.val_csv = resolve(p.val_csv, base);
    if (p.train_csv.empty() != p.val_csv.empty()) s.fail("val_csv", "give both CSV files or neither");
    if (p.samples < 1 || p.val_samples < 1 || p.features < 1 || p.classes < 2) {
      s.fail("classes", "need samples, val_samples, features >= 1 and classes >= 2");
    }
  } else {
    s.fail("type", "unknown problem type '" + p.type + "'");
  }
  // Keys of the other families are rejected like any other unknown key.
  for (const auto* other : {&kQuadraticKeys, &kTvKeys, &kLogisticKeys}) {
    if (other == own) continue;
    for (const auto& key : *other) {
      if (s.has(key) && !own->count(key)) s.fail(key, "not valid for problem type '" + p.type + "'");
    }
  }
  s.finish();
  return p;
}

MaidConfig parse_maid(Section s) {
  MaidConfig m;
  s.read("rho_down", m.rho_down);
  s.read("rho_up", m.rho_up);
  s.read("nu_down", m.nu_down);
  s.read("nu_up", m.nu_up);
  s.read("eta", m.eta);
  s.read("lambda", m.lambda);
  s.read("eps0", m.eps0);
  s.read("delta0", m.delta0);
  s.read("alpha0", m.alpha0);
  std::string step_init = "fixed";
  s.read("step_init", step_init);
  if (step_init == "fixed") {
    m.step_init = StepInit::fixed;
  } else if (step_init == "sqrt_d_over_z0") {
    m.step_init = StepInit::sqrt_d_over_z0;
  } else {
    s.fail("step_init", "expected 'fixed' or 'sqrt_d_over_z0'");
  }
  s.read("max_bt", m.max_bt);
  s.read("budget", m.budget_cap);
  s.read("max_outer", m.max_outer);
  s.read("fixed_accuracy", m.fixed_accuracy);
  s.read("grad_tol", m.grad_tol);
  s.read("eps_floor", m.eps_floor);
  s.read("max_inner_attempts", m.max_inner_attempts);
  s.read("fista_max_iter", m.fista.max_iter);
  s.read("cg_max_iter", m.cg.max_iter);
  s.finish();
  return m;
}

}  // namespace

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  Section root(doc, "");
  RunConfig c;
  root.read("name", c.name);
  root.read("seed", c.seed);
  root.read("output", c.output);
  c.output = resolve(c.output, base_dir);
  if (!root.has("problem")) root.fail("problem", "missing");
  c.problem = parse_problem(root.child("problem"), base_dir);
  if (root.has("maid")) c.maid = parse_maid(root.child("maid"));
  root.read("theta0", c.theta0);
  if (root.has("sweep")) {
    Section sweep = root.child("sweep");
    sweep.read("eps0", c.eps0_list);
    sweep.read("fixed_accuracy", c.fixed_accuracy_list);
    sweep.finish();
  }
  root.finish();

  if (c.name.empty() || c.name.find('/') != std::string::npos) root.fail("name", "must be a plain file stem");
  for (const RunSpec& run : expand_sweep(c)) run.maid.validate();
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_json_file(path), path.parent_path());
}

void apply_overrides(RunConfig& config, const Overrides& overrides) {
  if (overrides.budget) {
    if (*overrides.budget < 0) throw ConfigError("--budget must be non-negative");
    config.maid.budget_cap = overrides.budget;
  }
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out) config.output = *overrides.out;
}

json to_json(const RunConfig& c) {
  json problem{{"type", c.problem.type}};
  if (c.problem.data_seed) problem["seed"] = *c.problem.data_seed;
  auto paths = [](const std::vector<fs::path>& v) {
    json out = json::array();
    for (const auto& p : v) out.push_back(p.string());
    return out;
  };
  if (c.problem.type == "quadratic") {
    problem.update({{"rows", c.problem.rows}, {"n", c.problem.n}, {"d", c.problem.d},
                    {"noise", c.problem.noise}});
  } else if (c.problem.type == "tv") {
    problem.update({{"width", c.problem.width}, {"height", c.problem.height},
                    {"count", c.problem.count}, {"sigma", c.problem.sigma},
                    {"images", paths(c.problem.images)}, {"clean", paths(c.problem.clean)},
                    {"robust", c.problem.robust}});
  } else {
    problem.update({{"samples", c.problem.samples}, {"val_samples", c.problem.val_samples},
                    {"features", c.problem.features}, {"classes", c.problem.classes},
                    {"separation", c.problem.separation}});
    if (!c.problem.train_csv.empty()) {
      problem["train_csv"] = c.problem.train_csv.string();
      problem["val_csv"] = c.problem.val_csv.string();
    }
  }

  const MaidConfig& m = c.maid;
  json maid{{"rho_down", m.rho_down},   {"rho_up", m.rho_up},
            {"nu_down", m.nu_down},     {"nu_up", m.nu_up},
            {"eta", m.eta},             {"lambda", m.lambda},
            {"eps0", m.eps0},           {"delta0", m.delta0},
            {"alpha0", m.alpha0},       {"max_bt", m.max_bt},
            {"max_outer", m.max_outer}, {"fixed_accuracy", m.fixed_accuracy},
            {"grad_tol", m.grad_tol},   {"eps_floor", m.eps_floor},
            {"max_inner_attempts", m.max_inner_attempts},
            {"fista_max_iter", m.fista.max_iter},
            {"cg_max_iter", m.cg.max_iter}};
  maid["step_init"] = m.step_init == StepInit::fixed ? "fixed" : "sqrt_d_over_z0";
  maid["budget"] = m.budget_cap ? json(*m.budget_cap) : json(nullptr);

  json out{{"name", c.name}, {"seed", c.seed}, {"output", c.output.string()},
           {"problem", problem}, {"maid", maid}};
  if (c.theta0) out["theta0"] = *c.theta0;
  json sweep = json::object();
  if (!c.eps0_list.empty()) sweep["eps0"] = c.eps0_list;
  if (!c.fixed_accuracy_list.empty()) sweep["fixed_accuracy"] = c.fixed_accuracy_list;
  if (!sweep.empty()) out["sweep"] = sweep;
  return out;
}

std::vector<RunSpec> expand_sweep(const RunConfig& c) {
  const std::vector<double> eps_values =
      c.eps0_list.empty() ? std::vector<double>{c.maid.eps0} : c.eps0_list;
  const std::vector<bool> fixed_values =
      c.fixed_accuracy_list.empty() ? std::vector<bool>{c.maid.fixed_accuracy} : c.fixed_accuracy_list;
  const bool label_eps = !c.eps0_list.empty();
  const bool label_fixed = !c.fixed_accuracy_list.empty();

  std::vector<RunSpec> runs;
  for (bool fixed : fixed_values) {
    for (double eps : eps_values) {
      RunSpec run;
      run.maid = c.maid;
      run.maid.seed = c.seed;
      run.maid.fixed_accuracy = fixed;
      if (label_eps) {
        run.maid.eps0 = eps;
        run.maid.delta0 = eps;
      }
      char buf[64];
      std::string label = c.name;
      if (label_fixed) label += fixed ? "_fixed" : "_adaptive";
      if (label_eps) {
        std::snprintf(buf, sizeof buf, "_eps%.0e", eps);
        label += buf;
      }
      run.label = label;
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

DenoiseConfig parse_denoise_config(const json& doc, const fs::path& base_dir) {
  Section s(doc, "");
  DenoiseConfig d;
  s.read("theta", d.theta);
  s.read("theta_from", d.theta_from);
  s.read("input", d.input);
  s.read("reference", d.reference);
  s.read("output", d.output);
  s.read("eps", d.eps);
  s.finish();
  if (d.theta.has_value() == !d.theta_from.empty()) s.fail("theta", "give exactly one of theta, theta_from");
  if (d.theta && d.theta->size() != 2) s.fail("theta", "TV denoising takes two parameters");
  if (d.input.empty()) s.fail("input", "missing");
  if (!(d.eps > 0.0)) s.fail("eps", "must be positive");
  d.theta_from = resolve(d.theta_from, base_dir);
  d.input = resolve(d.input, base_dir);
  d.reference = resolve(d.reference, base_dir);
  d.output = resolve(d.output, base_dir);
  return d;
}

DenoiseConfig load_denoise_config(const fs::path& path) {
  return parse_denoise_config(read_json_file(path), path.parent_path());
}

}  // namespace maid::experiment
