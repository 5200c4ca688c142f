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

#ifndef SPARSE_LDP_TRUNCATED_H_
#define SPARSE_LDP_TRUNCATED_H_

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sparse_ldp/kernel.h"
#include "sparse_ldp/mechanism_spec.h"

namespace sparse_ldp {

inline absl::Status ValidateSupportSize(int64_t s) {
  if (s < 1 || s % 2 == 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "support size s must be an odd positive integer, got %d", s));
  }
  return absl::OkStatus();
}

// An s-sparse translation-invariant channel: input x emits x + k for
// |k| <= t = (s - 1) / 2 with probability proportional to w(|k|). The privacy
// range H and target epsilon ride along because every downstream quantity is
// evaluated at a fixed (H, epsilon).
class TruncatedParams {
 public:
  static absl::StatusOr<TruncatedParams> Create(KernelFamily kernel,
                                                int64_t support_size,
                                                int64_t range = 0,
                                                double epsilon = 0) {
    if (auto status = ValidateSupportSize(support_size); !status.ok()) {
      return status;
    }
    if (range < 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "privacy range H must be a nonnegative integer, got %d", range));
    }
    if (!std::isfinite(epsilon) || epsilon < 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "epsilon must be finite and nonnegative, got %g", epsilon));
    }
    return TruncatedParams(kernel, support_size, range, epsilon);
  }

  const KernelFamily& kernel() const { return kernel_; }
  int64_t support_size() const { return support_size_; }
  int64_t radius() const { return (support_size_ - 1) / 2; }
  int64_t range() const { return range_; }
  double epsilon() const { return epsilon_; }

 private:
  TruncatedParams(KernelFamily kernel, int64_t s, int64_t range,
                  double epsilon)
      : kernel_(kernel), support_size_(s), range_(range), epsilon_(epsilon) {}

  KernelFamily kernel_;
  int64_t support_size_;
  int64_t range_;
  double epsilon_;
};

struct DistortionMoments {
  double r1 = 0;  // E|Y - x|
  double r2 = 0;  // E(Y - x)^2
};

// C_t for Laplace, Gamma_t(sigma) for Gaussian: 1 + 2 * sum_{j=1}^t w(j).
inline double WindowNormalizer(const KernelFamily& kernel, int64_t radius) {
  double tail = 0;
  for (int64_t j = 1; j <= radius; ++j) {
    tail += kernel.Weight(static_cast<double>(j));
  }
  return 1 + 2 * tail;
}

// Mass at each offset k in [-t, t]. The values depend only on |k|, so the
// distribution at any input is an exact shift of this one.
inline std::vector<double> OffsetMasses(const KernelFamily& kernel,
                                        int64_t radius) {
  const double normalizer = WindowNormalizer(kernel, radius);
  std::vector<double> masses(2 * radius + 1);
  for (int64_t k = -radius; k <= radius; ++k) {
    masses[k + radius] =
        kernel.Weight(static_cast<double>(k < 0 ? -k : k)) / normalizer;
  }
  return masses;
}

inline Pmf TruncatedPmf(const TruncatedParams& params, int64_t x) {
  const int64_t t = params.radius();
  const std::vector<double> masses = OffsetMasses(params.kernel(), t);
  Pmf pmf;
  pmf.reserve(masses.size());
  for (int64_t k = -t; k <= t; ++k) pmf.push_back({x + k, masses[k + t]});
  return pmf;
}

// Closed-form R1 = 2 sum j w(j) / C_t and R2 = 2 sum j^2 w(j) / C_t.
inline DistortionMoments ComputeDistortionMoments(const KernelFamily& kernel,
                                                  int64_t support_size) {
  const int64_t t = (support_size - 1) / 2;
  double first = 0;
  double second = 0;
  double tail = 0;
  for (int64_t j = 1; j <= t; ++j) {
    const double jd = static_cast<double>(j);
    const double w = kernel.Weight(jd);
    tail += w;
    first += jd * w;
    second += jd * jd * w;
  }
  const double normalizer = 1 + 2 * tail;
  return {2 * first / normalizer, 2 * second / normalizer};
}

inline DistortionMoments ComputeDistortionMoments(
    const TruncatedParams& params) {
  return ComputeDistortionMoments(params.kernel(), params.support_size());
}

// Builds the general-form channel that the truncated family denotes on the
// given inputs: outputs are the union of windows and d = |x - y|.
inline absl::StatusOr<MechanismSpec> MaterializeTruncated(
    const KernelFamily& kernel, int64_t radius,
    const std::vector<int64_t>& inputs) {
  if (radius < 0) {
    return absl::InvalidArgumentError("radius must be nonnegative");
  }
  std::set<int64_t> outputs;
  std::map<int64_t, std::vector<int64_t>> supports;
  for (int64_t x : inputs) {
    std::vector<int64_t>& support = supports[x];
    for (int64_t y = x - radius; y <= x + radius; ++y) {
      support.push_back(y);
      outputs.insert(y);
    }
  }
  return MechanismSpec::Create(
      kernel, inputs, std::vector<int64_t>(outputs.begin(), outputs.end()),
      std::move(supports));
}

}  // namespace sparse_ldp

#endif  // SPARSE_LDP_TRUNCATED_H_
