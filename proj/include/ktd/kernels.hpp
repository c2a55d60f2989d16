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

#ifndef KTD_KERNELS_HPP
#define KTD_KERNELS_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ktd {

enum class KernelFamily { kGaussian, kLaplacian, kEnergy, kSquared, kNormalized };

/// Immutable description of a positive-definite kernel.
///
///   gaussian    k(x,y) = exp(-|x-y|_2^2 / (2 sigma^2))
///   laplacian   k(x,y) = exp(-|x-y|_1 / sigma)
///   energy      k(x,y) = (|x| + |y| - |x-y|) / 2       (no bandwidth, k(x,x) != 1)
///   squared     k(x,y) = inner(x,y)^2
///   normalized  k(x,y) = inner(x,y) / sqrt(inner(x,x) inner(y,y))
///
/// Wrapper families share their inner spec; copies are cheap.
class KernelSpec {
 public:
  static KernelSpec gaussian(double bandwidth);
  static KernelSpec laplacian(double bandwidth);
  static KernelSpec energy();
  static KernelSpec squared(const KernelSpec& inner);
  static KernelSpec normalized(const KernelSpec& inner);

  [[nodiscard]] KernelFamily family() const { return family_; }
  /// Bandwidth of a gaussian/laplacian spec; 0 for the other families.
  [[nodiscard]] double bandwidth() const { return bandwidth_; }
  /// Inner spec of a squared/normalized wrapper, nullptr otherwise.
  [[nodiscard]] const KernelSpec* inner() const { return inner_.get(); }

  /// k(x,x) = 1 for every x.
  [[nodiscard]] bool unit_diagonal() const;
  /// kernel_grad_y is defined.
  [[nodiscard]] bool differentiable() const;
  /// Translation invariant: k(x+t, y+t) = k(x,y).
  [[nodiscard]] bool translation_invariant() const;

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const KernelSpec& a, const KernelSpec& b);

 private:
  KernelSpec(KernelFamily family, double bandwidth, std::shared_ptr<const KernelSpec> inner)
      : family_(family), bandwidth_(bandwidth), inner_(std::move(inner)) {}

  KernelFamily family_;
  double bandwidth_;
  std::shared_ptr<const KernelSpec> inner_;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// Gradient of k(x, y) with respect to y, written into `out` (same size as y).
/// Laplacian coordinates with x_i == y_i contribute 0.
void kernel_grad_y(const KernelSpec& spec, std::span<const double> x, std::span<const double> y,
                   std::span<double> out);
std::vector<double> kernel_grad_y(const KernelSpec& spec, std::span<const double> x,
                                  std::span<const double> y);

/// Spec evaluating k(x,y)^2. Gaussian and laplacian stay in their family
/// (bandwidth / sqrt(2) and / 2 respectively).
KernelSpec kernel_square(const KernelSpec& spec);

/// Parse a kernel family name ("gaussian", "laplacian", "energy").
KernelSpec kernel_from_name(const std::string& family, double bandwidth);

/// {"family": ..., "bandwidth": ...}; wrappers nest their inner spec under "inner".
nlohmann::json to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::json& j);

}  // namespace ktd

#endif  // KTD_KERNELS_HPP
