#include "maid/problems/logistic.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "maid/random.hpp"

namespace maid {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> as_weights(const StateVector& x, Eigen::Index p, Eigen::Index q) {
  return {x.data(), p, q};
}

// Row-wise softmax, stabilized by the row maximum.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits, Eigen::VectorXd* log_norm) {
  Eigen::MatrixXd probs(logits.rows(), logits.cols());
  if (log_norm) log_norm->resize(logits.rows());
  for (Eigen::Index j = 0; j < logits.rows(); ++j) {
    const double shift = logits.row(j).maxCoeff();
    probs.row(j) = (logits.row(j).array() - shift).exp();
    const double total = probs.row(j).sum();
    probs.row(j) /= total;
    if (log_norm) (*log_norm)[j] = shift + std::log(total);
  }
  return probs;
}

double half_max_eigen_gram(const Eigen::MatrixXd& features) {
  const Eigen::MatrixXd gram = features.transpose() * features;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().maxCoeff();
}

void validate(const ClassificationData& data, const char* which) {
  if (data.features.rows() == 0 || data.features.rows() != static_cast<Eigen::Index>(data.labels.size())) {
    throw ConfigError(std::string("LogisticBilevel: ") + which + " data is empty or inconsistent");
  }
  for (int label : data.labels) {
    if (label < 0 || label >= data.classes) {
      throw ConfigError(std::string("LogisticBilevel: ") + which + " label out of range");
    }
  }
}

}  // namespace

double softmax_cross_entropy(const ClassificationData& data, const StateVector& x,
                             Eigen::Index classes, StateVector* grad) {
  const Eigen::Index p = data.features.cols();
  const Eigen::MatrixXd logits = data.features * as_weights(x, p, classes);
  Eigen::VectorXd log_norm;
  Eigen::MatrixXd probs = softmax_rows(logits, &log_norm);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < logits.rows(); ++j) {
    const int label = data.labels[static_cast<std::size_t>(j)];
    loss += log_norm[j] - logits(j, label);
    probs(j, label) -= 1.0;
  }
  if (grad) {
    const RowMajor g = data.features.transpose() * probs;
    *grad = Eigen::Map<const StateVector>(g.data(), g.size());
  }
  return loss;
}

LogisticBilevel::LogisticBilevel(ClassificationData train, ClassificationData validation)
    : train_(std::move(train)), val_(std::move(validation)) {
  validate(train_, "training");
  validate(val_, "validation");
  if (train_.features.cols() != val_.features.cols() || train_.classes != val_.classes) {
    throw ConfigError("LogisticBilevel: training and validation shapes differ");
  }
  if (train_.classes < 2) throw ConfigError("LogisticBilevel: need at least two classes");
  p_ = train_.features.cols();
  q_ = train_.classes;
  lip_data_ = half_max_eigen_gram(train_.features);
  lip_upper_ = half_max_eigen_gram(val_.features);
}

double LogisticBilevel::lower_value(const StateVector& x, const ParamVector& theta) const {
  return softmax_cross_entropy(train_, x, q_, nullptr) +
         0.5 * (theta.array().exp() * x.array().square()).sum();
}

StateVector LogisticBilevel::lower_grad(const StateVector& x, const ParamVector& theta) const {
  StateVector grad;
  softmax_cross_entropy(train_, x, q_, &grad);
  grad.array() += theta.array().exp() * x.array();
  return grad;
}

StateVector LogisticBilevel::lower_hvp(const StateVector& x, const ParamVector& theta,
                                       const StateVector& v) const {
  const Eigen::MatrixXd probs = softmax_rows(train_.features * as_weights(x, p_, q_), nullptr);
  const Eigen::MatrixXd t = train_.features * as_weights(v, p_, q_);
  // (diag π − ππᵀ)t per sample
  const Eigen::MatrixXd pt = probs.cwiseProduct(t);
  const Eigen::VectorXd mean = pt.rowwise().sum();
  const Eigen::MatrixXd r = pt - probs.cwiseProduct(mean.replicate(1, q_));
  const RowMajor hv = train_.features.transpose() * r;
  StateVector out = Eigen::Map<const StateVector>(hv.data(), hv.size());
  out.array() += theta.array().exp() * v.array();
  return out;
}

StateVector LogisticBilevel::mixed_jvp(const StateVector& x, const ParamVector& theta,
                                       const ParamVector& w) const {
  return (theta.array().exp() * x.array() * w.array()).matrix();
}

ParamVector LogisticBilevel::mixed_jvp_transpose(const StateVector& x, const ParamVector& theta,
                                                 const StateVector& v) const {
  return (theta.array().exp() * x.array() * v.array()).matrix();
}

double LogisticBilevel::upper_value(const StateVector& x) const {
  return softmax_cross_entropy(val_, x, q_, nullptr);
}

StateVector LogisticBilevel::upper_grad(const StateVector& x) const {
  StateVector grad;
  softmax_cross_entropy(val_, x, q_, &grad);
  return grad;
}

double LogisticBilevel::mu(const ParamVector& theta) const { return std::exp(theta.minCoeff()); }

double LogisticBilevel::lip_lower(const ParamVector& theta) const {
  return std::exp(theta.maxCoeff()) + lip_data_;
}

ClassificationData synth_classification(int samples, int features, int classes,
                                        double separation, std::uint64_t seed,
                                        std::uint64_t sample_stream) {
  if (samples < 1 || features < 1 || classes < 2) {
    throw ConfigError("synth_classification: need samples, features >= 1 and classes >= 2");
  }
  Rng center_rng(derive_seed(seed, "class_centers"));
  Eigen::MatrixXd centers(classes, features);
  for (int c = 0; c < classes; ++c) centers.row(c) = separation * standard_normal(features, center_rng);

  Rng rng(derive_seed(seed, "class_samples", sample_stream));
  std::uniform_int_distribution<int> pick(0, classes - 1);
  ClassificationData data;
  data.classes = classes;
  data.features.resize(samples, features);
  data.labels.resize(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    const int label = pick(rng);
    data.labels[static_cast<std::size_t>(j)] = label;
    data.features.row(j) = centers.row(label) + standard_normal(features, rng).transpose();
  }
  return data;
}

}  // namespace maid
