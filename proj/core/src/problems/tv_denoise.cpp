#include "maid/problems/tv_denoise.hpp"

#include <cmath>

namespace maid {
namespace {

// Forward differences of one image, zero on the last column (dx) / row (dy).
void forward_diff(const double* x, int w, int h, double* dx, double* dy) {
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int i = r * w + c;
      dx[i] = c + 1 < w ? x[i + 1] - x[i] : 0.0;
      dy[i] = r + 1 < h ? x[i + w] - x[i] : 0.0;
    }
  }
}

// out += scale·Dᵀ(px, py)
void add_diff_adjoint(const double* px, const double* py, int w, int h, double scale, double* out) {
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int i = r * w + c;
      if (c + 1 < w) {
        out[i] -= scale * px[i];
        out[i + 1] += scale * px[i];
      }
      if (r + 1 < h) {
        out[i] -= scale * py[i];
        out[i + w] += scale * py[i];
      }
    }
  }
}

struct TvParams {
  double weight;     // e^{θ₀}
  double smooth_sq;  // e^{2θ₁}
};

TvParams unpack(const ParamVector& theta) {
  if (theta.size() != 2) throw ConfigError("TVDenoise expects two parameters");
  return {std::exp(theta[0]), std::exp(2.0 * theta[1])};
}

}  // namespace

TVDenoise::TVDenoise(std::vector<Image> noisy, std::vector<Image> truth) {
  if (noisy.empty() || noisy.size() != truth.size()) {
    throw ConfigError("TVDenoise: need matching non-empty noisy and ground-truth sets");
  }
  width_ = noisy.front().width;
  height_ = noisy.front().height;
  if (width_ < 1 || height_ < 1) throw ConfigError("TVDenoise: empty image");
  count_ = static_cast<int>(noisy.size());
  const Eigen::Index pixels = Eigen::Index{width_} * height_;
  n_ = pixels * count_;
  y_.resize(n_);
  truth_.resize(n_);
  for (int t = 0; t < count_; ++t) {
    for (const Image* img : {&noisy[t], &truth[t]}) {
      if (img->width != width_ || img->height != height_ || img->size() != pixels) {
        throw ConfigError("TVDenoise: all images must share one size");
      }
    }
    y_.segment(t * pixels, pixels) = noisy[t].pixels;
    truth_.segment(t * pixels, pixels) = truth[t].pixels;
  }
}

double TVDenoise::lip_lower(const ParamVector& theta) const {
  if (theta.size() != 2) throw ConfigError("TVDenoise expects two parameters");
  return 1.0 + 8.0 * std::exp(theta[0]) / std::exp(theta[1]);
}

double TVDenoise::lower_value(const StateVector& x, const ParamVector& theta) const {
  const TvParams p = unpack(theta);
  const Eigen::Index pixels = Eigen::Index{width_} * height_;
  Eigen::VectorXd dx(pixels), dy(pixels);
  double tv = 0.0;
  for (int t = 0; t < count_; ++t) {
    forward_diff(x.data() + t * pixels, width_, height_, dx.data(), dy.data());
    tv += (dx.array().square() + dy.array().square() + p.smooth_sq).sqrt().sum();
  }
  return 0.5 * (x - y_).squaredNorm() + p.weight * tv;
}

StateVector TVDenoise::lower_grad(const StateVector& x, const ParamVector& theta) const {
  const TvParams p = unpack(theta);
  const Eigen::Index pixels = Eigen::Index{width_} * height_;
  StateVector grad = x - y_;
  Eigen::ArrayXd dx(pixels), dy(pixels);
  for (int t = 0; t < count_; ++t) {
    forward_diff(x.data() + t * pixels, width_, height_, dx.data(), dy.data());
    const Eigen::ArrayXd inv_phi = (dx.square() + dy.square() + p.smooth_sq).rsqrt();
    const Eigen::ArrayXd px = dx * inv_phi;
    const Eigen::ArrayXd py = dy * inv_phi;
    add_diff_adjoint(px.data(), py.data(), width_, height_, p.weight, grad.data() + t * pixels);
  }
  return grad;
}

StateVector TVDenoise::lower_hvp(const StateVector& x, const ParamVector& theta,
                                 const StateVector& v) const {
  const TvParams p = unpack(theta);
  const Eigen::Index pixels = Eigen::Index{width_} * height_;
  StateVector out = v;
  Eigen::ArrayXd dx(pixels), dy(pixels), vx(pixels), vy(pixels);
  for (int t = 0; t < count_; ++t) {
    forward_diff(x.data() + t * pixels, width_, height_, dx.data(), dy.data());
    forward_diff(v.data() + t * pixels, width_, height_, vx.data(), vy.data());
    const Eigen::ArrayXd inv_phi = (dx.square() + dy.square() + p.smooth_sq).rsqrt();
    const Eigen::ArrayXd inv_phi3 = inv_phi.cube();
    // Per-pixel Hessian of √(|g|² + υ²): I/φ − ggᵀ/φ³
    const Eigen::ArrayXd proj = dx * vx + dy * vy;
    const Eigen::ArrayXd px = vx * inv_phi - dx * proj * inv_phi3;
    const Eigen::ArrayXd py = vy * inv_phi - dy * proj * inv_phi3;
    add_diff_adjoint(px.data(), py.data(), width_, height_, p.weight, out.data() + t * pixels);
  }
  return out;
}

void TVDenoise::mixed_columns(const StateVector& x, const ParamVector& theta, StateVector& c0,
                              StateVector& c1) const {
  const TvParams p = unpack(theta);
  const Eigen::Index pixels = Eigen::Index{width_} * height_;
  c0 = StateVector::Zero(n_);
  c1 = StateVector::Zero(n_);
  Eigen::ArrayXd dx(pixels), dy(pixels);
  for (int t = 0; t < count_; ++t) {
    forward_diff(x.data() + t * pixels, width_, height_, dx.data(), dy.data());
    const Eigen::ArrayXd inv_phi = (dx.square() + dy.square() + p.smooth_sq).rsqrt();
    const Eigen::ArrayXd inv_phi3 = inv_phi.cube();
    // ∂/∂θ₀ of the TV gradient: e^{θ₀}Dᵀ(g/φ)
    Eigen::ArrayXd px = dx * inv_phi;
    Eigen::ArrayXd py = dy * inv_phi;
    add_diff_adjoint(px.data(), py.data(), width_, height_, p.weight, c0.data() + t * pixels);
    // ∂/∂θ₁: ∂φ/∂θ₁ = υ²/φ, giving −e^{θ₀}υ²Dᵀ(g/φ³)
    px = dx * inv_phi3;
    py = dy * inv_phi3;
    add_diff_adjoint(px.data(), py.data(), width_, height_, -p.weight * p.smooth_sq,
                     c1.data() + t * pixels);
  }
}

StateVector TVDenoise::mixed_jvp(const StateVector& x, const ParamVector& theta,
                                 const ParamVector& w) const {
  StateVector c0, c1;
  mixed_columns(x, theta, c0, c1);
  return w[0] * c0 + w[1] * c1;
}

ParamVector TVDenoise::mixed_jvp_transpose(const StateVector& x, const ParamVector& theta,
                                           const StateVector& v) const {
  StateVector c0, c1;
  mixed_columns(x, theta, c0, c1);
  ParamVector out(2);
  out << c0.dot(v), c1.dot(v);
  return out;
}

double TVDenoise::upper_value(const StateVector& x) const {
  return 0.5 * (x - truth_).squaredNorm() / static_cast<double>(count_);
}

StateVector TVDenoise::upper_grad(const StateVector& x) const {
  return (x - truth_) / static_cast<double>(count_);
}

std::vector<Image> TVDenoise::unstack(const StateVector& x) const {
  const Eigen::Index pixels = Eigen::Index{width_} * height_;
  std::vector<Image> out;
  out.reserve(count_);
  for (int t = 0; t < count_; ++t) {
    Image img(width_, height_);
    img.pixels = x.segment(t * pixels, pixels);
    out.push_back(std::move(img));
  }
  return out;
}

}  // namespace maid
