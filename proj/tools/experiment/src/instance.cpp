#include "maid/experiment/instance.hpp"

#include <filesystem>

#include "maid/image.hpp"
#include "maid/io/csv_dataset.hpp"
#include "maid/io/pgm.hpp"
#include "maid/problems/logistic.hpp"
#include "maid/problems/quadratic.hpp"
#include "maid/problems/robust_loss.hpp"
#include "maid/random.hpp"

namespace maid::experiment {
namespace {

void require_file(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("missing input file " + path.string());
}

}  // namespace

std::uint64_t data_seed_for(const ProblemConfig& config, std::uint64_t root_seed) {
  return config.data_seed ? *config.data_seed : derive_seed(root_seed, "data");
}

Instance build_instance(const ProblemConfig& config, std::uint64_t root_seed,
                        const std::optional<std::vector<double>>& theta0) {
  Instance inst;
  inst.data_seed = data_seed_for(config, root_seed);

  if (config.type == "quadratic") {
    QuadraticBilevel::Synthesis synth;
    synth.rows = config.rows;
    synth.n = config.n;
    synth.d = config.d;
    synth.noise = config.noise;
    synth.seed = inst.data_seed;
    auto problem = std::make_shared<QuadraticBilevel>(QuadraticBilevel::synthesize(synth));
    inst.problem = problem;
    inst.oracle = problem;
    inst.theta0 = ParamVector::Ones(config.d);
  } else if (config.type == "tv") {
    std::vector<Image> noisy;
    std::vector<Image> clean;
    if (config.images.empty()) {
      TvDataset data = synth_tv_dataset(config.width, config.height, config.count, config.sigma,
                                        inst.data_seed);
      noisy = std::move(data.noisy);
      clean = std::move(data.ground_truth);
    } else {
      for (std::size_t i = 0; i < config.images.size(); ++i) {
        require_file(config.images[i]);
        require_file(config.clean[i]);
        noisy.push_back(io::read_pgm(config.images[i]));
        clean.push_back(io::read_pgm(config.clean[i]));
      }
    }
    const int blocks = static_cast<int>(noisy.size());
    auto tv = std::make_shared<TVDenoise>(std::move(noisy), std::move(clean));
    inst.tv = tv;
    inst.problem = config.robust ? ProblemPtr(std::make_shared<RobustLossWrapper>(tv, tv->truth(), blocks))
                                 : ProblemPtr(tv);
    inst.theta0 = ParamVector::Constant(2, -5.0);
  } else if (config.type == "logistic") {
    ClassificationData train;
    ClassificationData val;
    if (config.train_csv.empty()) {
      train = synth_classification(config.samples, config.features, config.classes,
                                   config.separation, inst.data_seed, 0);
      val = synth_classification(config.val_samples, config.features, config.classes,
                                 config.separation, inst.data_seed, 1);
    } else {
      require_file(config.train_csv);
      require_file(config.val_csv);
      train = io::read_classification_csv(config.train_csv, config.classes);
      val = io::read_classification_csv(config.val_csv, config.classes);
    }
    auto problem = std::make_shared<LogisticBilevel>(std::move(train), std::move(val));
    inst.theta0 = ParamVector::Zero(problem->dims().d);
    inst.problem = problem;
  } else {
    throw ConfigError("unknown problem type '" + config.type + "'");
  }

  if (theta0) {
    if (static_cast<Eigen::Index>(theta0->size()) != inst.problem->dims().d) {
      throw ConfigError("theta0 has " + std::to_string(theta0->size()) + " entries, problem needs " +
                        std::to_string(inst.problem->dims().d));
    }
    inst.theta0 = Eigen::Map<const ParamVector>(theta0->data(), static_cast<Eigen::Index>(theta0->size()));
  }
  return inst;
}

}  // namespace maid::experiment
