// Copyright 2026 The ktdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ktd/kernels.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ktd/errors.hpp"

namespace ktd {
namespace {

void check_bandwidth(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidArgument(fmt::format("kernel bandwidth must be positive and finite, got {}", bandwidth));
  }
}

void check_dims(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionMismatch(fmt::format("kernel arguments have dimensions {} and {}", x.size(), y.size()));
  }
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

double l1_distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += std::abs(x[i] - y[i]);
  }
  return s;
}

double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    s += v * v;
  }
  return std::sqrt(s);
}

double eval_unchecked(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  switch (spec.family()) {
    case KernelFamily::kGaussian: {
      const double sigma = spec.bandwidth();
      return std::exp(-squared_distance(x, y) / (2.0 * sigma * sigma));
    }
    case KernelFamily::kLaplacian:
      return std::exp(-l1_distance(x, y) / spec.bandwidth());
    case KernelFamily::kEnergy:
      return 0.5 * (euclidean_norm(x) + euclidean_norm(y) - std::sqrt(squared_distance(x, y)));
    case KernelFamily::kSquared: {
      const double v = eval_unchecked(*spec.inner(), x, y);
      return v * v;
    }
    case KernelFamily::kNormalized: {
      const KernelSpec& inner = *spec.inner();
      return eval_unchecked(inner, x, y) / std::sqrt(eval_unchecked(inner, x, x) * eval_unchecked(inner, y, y));
    }
  }
  return 0.0;
}

void grad_unchecked(const KernelSpec& spec, std::span<const double> x, std::span<const double> y,
                    std::span<double> out) {
  switch (spec.family()) {
    case KernelFamily::kGaussian: {
      const double sigma2 = spec.bandwidth() * spec.bandwidth();
      const double k = std::exp(-squared_distance(x, y) / (2.0 * sigma2));
      for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = -(y[i] - x[i]) / sigma2 * k;
      }
      return;
    }
    case KernelFamily::kLaplacian: {
      const double sigma = spec.bandwidth();
      const double k = std::exp(-l1_distance(x, y) / sigma);
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - x[i];
        // Subgradient choice at ties.
        out[i] = d > 0.0 ? -k / sigma : (d < 0.0 ? k / sigma : 0.0);
      }
      return;
    }
    case KernelFamily::kSquared: {
      const double v = eval_unchecked(*spec.inner(), x, y);
      grad_unchecked(*spec.inner(), x, y, out);
      for (double& g : out) {
        g *= 2.0 * v;
      }
      return;
    }
    case KernelFamily::kEnergy:
    case KernelFamily::kNormalized:
      break;
  }
  throw Unsupported(fmt::format("kernel gradient is not available for the {} kernel", spec.describe()));
}

}  // namespace

KernelSpec KernelSpec::gaussian(double bandwidth) {
  check_bandwidth(bandwidth);
  return {KernelFamily::kGaussian, bandwidth, nullptr};
}

KernelSpec KernelSpec::laplacian(double bandwidth) {
  check_bandwidth(bandwidth);
  return {KernelFamily::kLaplacian, bandwidth, nullptr};
}

KernelSpec KernelSpec::energy() { return {KernelFamily::kEnergy, 0.0, nullptr}; }

KernelSpec KernelSpec::squared(const KernelSpec& inner) {
  return {KernelFamily::kSquared, 0.0, std::make_shared<const KernelSpec>(inner)};
}

KernelSpec KernelSpec::normalized(const KernelSpec& inner) {
  return {KernelFamily::kNormalized, 0.0, std::make_shared<const KernelSpec>(inner)};
}

bool KernelSpec::unit_diagonal() const {
  switch (family_) {
    case KernelFamily::kGaussian:
    case KernelFamily::kLaplacian:
    case KernelFamily::kNormalized:
      return true;
    case KernelFamily::kEnergy:
      return false;
    case KernelFamily::kSquared:
      return inner_->unit_diagonal();
  }
  return false;
}

bool KernelSpec::differentiable() const {
  switch (family_) {
    case KernelFamily::kGaussian:
    case KernelFamily::kLaplacian:
      return true;
    case KernelFamily::kSquared:
      return inner_->differentiable();
    case KernelFamily::kEnergy:
    case KernelFamily::kNormalized:
      return false;
  }
  return false;
}

bool KernelSpec::translation_invariant() const {
  switch (family_) {
    case KernelFamily::kGaussian:
    case KernelFamily::kLaplacian:
      return true;
    case KernelFamily::kSquared:
    case KernelFamily::kNormalized:
      return inner_->translation_invariant();
    case KernelFamily::kEnergy:
      return false;
  }
  return false;
}

std::string KernelSpec::describe() const {
  switch (family_) {
    case KernelFamily::kGaussian:
      return fmt::format("gaussian(sigma={})", bandwidth_);
    case KernelFamily::kLaplacian:
      return fmt::format("laplacian(sigma={})", bandwidth_);
    case KernelFamily::kEnergy:
      return "energy";
    case KernelFamily::kSquared:
      return fmt::format("squared({})", inner_->describe());
    case KernelFamily::kNormalized:
      return fmt::format("normalized({})", inner_->describe());
  }
  return "unknown";
}

bool operator==(const KernelSpec& a, const KernelSpec& b) {
  if (a.family_ != b.family_ || a.bandwidth_ != b.bandwidth_) {
    return false;
  }
  if (a.inner_ == nullptr || b.inner_ == nullptr) {
    return a.inner_ == b.inner_;
  }
  return *a.inner_ == *b.inner_;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  check_dims(x, y);
  return eval_unchecked(spec, x, y);
}

void kernel_grad_y(const KernelSpec& spec, std::span<const double> x, std::span<const double> y,
                   std::span<double> out) {
  check_dims(x, y);
  if (out.size() != y.size()) {
    throw DimensionMismatch("gradient output buffer has the wrong size");
  }
  grad_unchecked(spec, x, y, out);
}

std::vector<double> kernel_grad_y(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(y.size());
  kernel_grad_y(spec, x, y, out);
  return out;
}

KernelSpec kernel_square(const KernelSpec& spec) {
  switch (spec.family()) {
    case KernelFamily::kGaussian:
      return KernelSpec::gaussian(spec.bandwidth() / std::sqrt(2.0));
    case KernelFamily::kLaplacian:
      return KernelSpec::laplacian(spec.bandwidth() / 2.0);
    default:
      return KernelSpec::squared(spec);
  }
}

KernelSpec kernel_from_name(const std::string& family, double bandwidth) {
  if (family == "gaussian") {
    return KernelSpec::gaussian(bandwidth);
  }
  if (family == "laplacian") {
    return KernelSpec::laplacian(bandwidth);
  }
  if (family == "energy") {
    return KernelSpec::energy();
  }
  throw InvalidArgument(fmt::format("unknown kernel family '{}'", family));
}

nlohmann::json to_json(const KernelSpec& spec) {
  switch (spec.family()) {
    case KernelFamily::kGaussian:
      return {{"family", "gaussian"}, {"bandwidth", spec.bandwidth()}};
    case KernelFamily::kLaplacian:
      return {{"family", "laplacian"}, {"bandwidth", spec.bandwidth()}};
    case KernelFamily::kEnergy:
      return {{"family", "energy"}, {"bandwidth", 0.0}};
    case KernelFamily::kSquared:
      return {{"family", "squared"}, {"bandwidth", 0.0}, {"inner", to_json(*spec.inner())}};
    case KernelFamily::kNormalized:
      return {{"family", "normalized"}, {"bandwidth", 0.0}, {"inner", to_json(*spec.inner())}};
  }
  return {};
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw InvalidArgument("kernel config must be an object with a string 'family'");
  }
  const auto family = j["family"].get<std::string>();
  if (family == "squared" || family == "normalized") {
    if (!j.contains("inner")) {
      throw InvalidArgument(fmt::format("'{}' kernel needs an 'inner' kernel", family));
    }
    const KernelSpec inner = kernel_from_json(j["inner"]);
    return family == "squared" ? KernelSpec::squared(inner) : KernelSpec::normalized(inner);
  }
  const double bandwidth = j.value("bandwidth", 1.0);
  return kernel_from_name(family, bandwidth);
}

}  // namespace ktd
