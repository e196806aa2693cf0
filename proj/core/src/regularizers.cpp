#include "spiral/regularizers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spiral {

double sigma(double z, double p1, double p2, double eps) {
  if (z == 0.0) return 0.0;
  const double w = eps * (std::abs(p1) + std::abs(p2));
  return z / std::sqrt(z * z + w * w);
}

double zeta(double z, double p1, double p2, double eps) {
  return 0.5 * (sigma(z, p1, p2, eps) + 1.0);
}

XiEvaluator::XiEvaluator(XiForm form, const EnergyDensity& density, double eps)
    : form_(form), eps_(eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("regularization width eps must be positive");
  if (form_ == XiForm::sector_sum) {
    if (density.count() < 3)
      throw std::invalid_argument("sector-sum form needs a density with >= 3 vectors");
    tilde_vectors_.reserve(density.vectors.size());
    for (const Vec2& n : density.vectors) tilde_vectors_.push_back(-n);
  }
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

Vec2 XiEvaluator::xi_tilde(Vec2 p) const {
  switch (form_) {
    case XiForm::smoothed_l1:
      return {sigma(p.x, p.x, p.y, eps_), sigma(p.y, p.x, p.y, eps_)};
    case XiForm::smoothed_l1_rotated: {
      const double q1 = (p.x + p.y) * kInvSqrt2;
      const double q2 = (p.x - p.y) * kInvSqrt2;
      const double s1 = sigma(q1, q1, q2, eps_);
      const double s2 = sigma(q2, q1, q2, eps_);
      return {(s1 + s2) * kInvSqrt2, (s1 - s2) * kInvSqrt2};
    }
    case XiForm::sector_sum: {
      Vec2 out{0.0, 0.0};
      const int n = static_cast<int>(tilde_vectors_.size());
      for (int j = 0; j < n; ++j) {
        const double gj = dot(tilde_vectors_[static_cast<std::size_t>(j)], p);
        double f = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
          if (k == j) continue;
          f = std::min(f, gj - dot(tilde_vectors_[static_cast<std::size_t>(k)], p));
        }
        out = out + zeta(f, 1.0, 0.0, eps_) * tilde_vectors_[static_cast<std::size_t>(j)];
      }
      return out;
    }
  }
  return {0.0, 0.0};
}

double XiEvaluator::gamma_tilde(Vec2 p) const {
  switch (form_) {
    case XiForm::smoothed_l1:
      return p.x * sigma(p.x, p.x, p.y, eps_) + p.y * sigma(p.y, p.x, p.y, eps_);
    case XiForm::smoothed_l1_rotated: {
      const double q1 = (p.x + p.y) * kInvSqrt2;
      const double q2 = (p.x - p.y) * kInvSqrt2;
      return q1 * sigma(q1, q1, q2, eps_) + q2 * sigma(q2, q1, q2, eps_);
    }
    case XiForm::sector_sum: {
      double out = 0.0;
      const int n = static_cast<int>(tilde_vectors_.size());
      for (int j = 0; j < n; ++j) {
        const double gj = dot(tilde_vectors_[static_cast<std::size_t>(j)], p);
        double f = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
          if (k == j) continue;
          f = std::min(f, gj - dot(tilde_vectors_[static_cast<std::size_t>(k)], p));
        }
        out += zeta(f, 1.0, 0.0, eps_) * gj;
      }
      return out;
    }
  }
  return 0.0;
}

}  // namespace spiral
