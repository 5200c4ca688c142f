//
// Copyright 2026 The Sparse LDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SPARSE_LDP_KERNEL_H_
#define SPARSE_LDP_KERNEL_H_

#include <cmath>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"

namespace sparse_ldp {

enum class KernelKind { kLaplace, kGaussian };

inline absl::string_view KernelKindName(KernelKind kind) {
  return kind == KernelKind::kLaplace ? "laplace" : "gaussian";
}

inline absl::StatusOr<KernelKind> ParseKernelKind(absl::string_view name) {
  if (name == "laplace") return KernelKind::kLaplace;
  if (name == "gaussian") return KernelKind::kGaussian;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown kernel family '%s' (expected laplace or gaussian)", name));
}

// Unnormalized weight over output distance d. The discrete-Laplace kernel is
// exp(-lambda * d) with lambda an inverse temperature; the Gaussian kernel is
// exp(-d^2 / (2 sigma^2)). Instances are immutable and validated on creation.
class KernelFamily {
 public:
  static absl::StatusOr<KernelFamily> Create(KernelKind kind, double param) {
    if (!std::isfinite(param) || param <= 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s parameter must be a positive finite number, got %g",
          kind == KernelKind::kLaplace ? "lambda" : "sigma", param));
    }
    return KernelFamily(kind, param);
  }
  static absl::StatusOr<KernelFamily> Laplace(double lambda) {
    return Create(KernelKind::kLaplace, lambda);
  }
  static absl::StatusOr<KernelFamily> Gaussian(double sigma) {
    return Create(KernelKind::kGaussian, sigma);
  }

  KernelKind kind() const { return kind_; }
  // lambda for Laplace, sigma for Gaussian.
  double param() const { return param_; }
  bool is_laplace() const { return kind_ == KernelKind::kLaplace; }

  double Weight(double distance) const {
    return std::exp(-Exponent(distance));
  }

  // -log Weight(distance).
  double Exponent(double distance) const {
    if (is_laplace()) return param_ * distance;
    return distance * distance / (2 * param_ * param_);
  }

  // Pointwise log-likelihood ratio log w(d_self) - log w(d_other) on a shared
  // output, before normalizer correction. Written as a difference of
  // distances so that integer distances cancel without rounding.
  double LossExponent(double d_self, double d_other) const {
    if (is_laplace()) return param_ * (d_other - d_self);
    return (d_other * d_other - d_self * d_self) / (2 * param_ * param_);
  }

  friend bool operator==(const KernelFamily&, const KernelFamily&) = default;

 private:
  KernelFamily(KernelKind kind, double param) : kind_(kind), param_(param) {}

  KernelKind kind_;
  double param_;
};

}  // namespace sparse_ldp

#endif  // SPARSE_LDP_KERNEL_H_
