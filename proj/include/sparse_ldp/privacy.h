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

// Exact privacy accounting for sparse channels.
//
// For a fixed ordered pair of inputs (x, x') the smallest delta for which
// Q(A|x) <= e^eps Q(A|x') + delta holds on every event A is the hockey-stick
// divergence sum_y [Q(y|x) - e^eps Q(y|x')]_+. For sparse channels it splits
// into mass that x puts where x' cannot go (support leakage) and positive-part
// excess on the shared outputs (overlap excess). The translation-invariant
// families reduce further to a function of the separation h = |x - x'|.

#ifndef SPARSE_LDP_PRIVACY_H_
#define SPARSE_LDP_PRIVACY_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sparse_ldp/kernel.h"
#include "sparse_ldp/mechanism_spec.h"
#include "sparse_ldp/truncated.h"

namespace sparse_ldp {

struct DefectBreakdown {
  double support_leakage = 0;
  double overlap_excess = 0;
  double total = 0;
};

// An ordered pair of inputs and an output. For an infinite result, y lies in
// S(x) \ S(x'); otherwise it attains the largest pointwise loss.
struct LossWitness {
  int64_t x;
  int64_t x_prime;
  int64_t y;
};

// Tagged pure-LDP level. `epsilon_star` is meaningful only when `finite`.
struct PureLdpResult {
  bool finite = true;
  double epsilon_star = 0;
  std::optional<LossWitness> witness;
};

namespace internal {

// w_self * [1 - e^(eps - loss)]_+, i.e. [w_self - e^eps w_other]_+ with
// loss = log(w_self / w_other). Zero unless loss strictly exceeds eps.
inline double ExcessAbove(double w_self, double loss, double epsilon) {
  if (!(loss > epsilon)) return 0.0;
  return -w_self * std::expm1(epsilon - loss);
}

inline DefectBreakdown MakeBreakdown(double leakage, double overlap) {
  leakage = std::clamp(leakage, 0.0, 1.0);
  overlap = std::clamp(overlap, 0.0, 1.0);
  return {leakage, overlap, std::min(1.0, leakage + overlap)};
}

inline bool Contains(const std::vector<int64_t>& sorted, int64_t y) {
  return std::binary_search(sorted.begin(), sorted.end(), y);
}

}  // namespace internal

// L(x, x'; y) = log Q(y|x) / Q(y|x') for y in S(x) and S(x').
inline absl::StatusOr<double> PointwiseLoss(const MechanismSpec& spec,
                                            int64_t x, int64_t x_prime,
                                            int64_t y) {
  auto support = spec.Support(x);
  if (!support.ok()) return support.status();
  auto support_prime = spec.Support(x_prime);
  if (!support_prime.ok()) return support_prime.status();
  if (!internal::Contains(*support, y) ||
      !internal::Contains(*support_prime, y)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "output %d is not in the common support of inputs %d and %d", y, x,
        x_prime));
  }
  if (x == x_prime) return 0.0;
  return spec.kernel().LossExponent(spec.Distance(x, y),
                                    spec.Distance(x_prime, y)) +
         (*LogNormalizer(spec, x_prime) - *LogNormalizer(spec, x));
}

inline PureLdpResult PureLdpEpsilon(const MechanismSpec& spec) {
  const auto& inputs = spec.inputs();
  std::vector<std::vector<int64_t>> supports;
  std::vector<double> log_normalizers;
  for (int64_t x : inputs) {
    supports.push_back(*spec.Support(x));
    log_normalizers.push_back(*LogNormalizer(spec, x));
  }

  for (size_t i = 0; i < inputs.size(); ++i) {
    for (size_t j = 0; j < inputs.size(); ++j) {
      if (i == j) continue;
      for (int64_t y : supports[i]) {
        if (!internal::Contains(supports[j], y)) {
          return {false, 0, LossWitness{inputs[i], inputs[j], y}};
        }
      }
    }
  }

  PureLdpResult result;
  for (size_t i = 0; i < inputs.size(); ++i) {
    for (size_t j = 0; j < inputs.size(); ++j) {
      if (i == j) continue;
      const double log_ratio = log_normalizers[j] - log_normalizers[i];
      for (int64_t y : supports[i]) {
        const double loss =
            spec.kernel().LossExponent(spec.Distance(inputs[i], y),
                                       spec.Distance(inputs[j], y)) +
            log_ratio;
        if (!result.witness || loss > result.epsilon_star) {
          result.epsilon_star = loss;
          result.witness = LossWitness{inputs[i], inputs[j], y};
        }
      }
    }
  }
  return result;
}

// Sufficient pure-LDP level lambda * D + log(Z_x' / Z_x) for a common-support
// Laplace channel whose distances differ by at most D.
inline double PureLdpBound(double lambda, double diameter,
                           double log_normalizer_ratio) {
  return lambda * diameter + log_normalizer_ratio;
}

inline absl::StatusOr<DefectBreakdown> OrderedDefect(const MechanismSpec& spec,
                                                     int64_t x,
                                                     int64_t x_prime,
                                                     double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  auto support = spec.Support(x);
  if (!support.ok()) return support.status();
  auto support_prime = spec.Support(x_prime);
  if (!support_prime.ok()) return support_prime.status();

  const Pmf pmf = *ComputePmf(spec, x);
  const double log_ratio =
      *LogNormalizer(spec, x_prime) - *LogNormalizer(spec, x);

  double leakage = 0;
  double overlap = 0;
  bool any_shared = false;
  for (const auto& [y, mass] : pmf) {
    const double d = spec.Distance(x, y);
    if (!internal::Contains(*support_prime, y)) {
      leakage += mass;
      continue;
    }
    any_shared = true;
    const double loss =
        spec.kernel().LossExponent(d, spec.Distance(x_prime, y)) + log_ratio;
    overlap += internal::ExcessAbove(mass, loss, epsilon);
  }
  // All of Q(.|x) leaks; report the exact value instead of a rounded sum.
  if (!any_shared) return DefectBreakdown{1.0, 0.0, 1.0};
  return internal::MakeBreakdown(leakage, overlap);
}

namespace internal {

inline absl::Status ValidateProbabilityPair(std::span<const double> p,
                                            std::span<const double> q,
                                            double epsilon) {
  constexpr double kSumTolerance = 1e-9;
  if (p.size() != q.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distributions have different lengths (%d vs %d)", p.size(),
        q.size()));
  }
  if (!std::isfinite(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  for (auto v : {p, q}) {
    double sum = 0;
    for (double x : v) {
      if (!std::isfinite(x) || x < 0) {
        return absl::InvalidArgumentError(
            "probabilities must be finite and nonnegative");
      }
      sum += x;
    }
    if (std::abs(sum - 1) > kSumTolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("probabilities sum to %.17g, not 1", sum));
    }
  }
  return absl::OkStatus();
}

}  // namespace internal

// sum_y [p(y) - e^eps q(y)]_+ over a common output list.
inline absl::StatusOr<double> BruteForceDefect(std::span<const double> p,
                                               std::span<const double> q,
                                               double epsilon) {
  if (auto status = internal::ValidateProbabilityPair(p, q, epsilon);
      !status.ok()) {
    return status;
  }
  const double scale = std::exp(epsilon);
  double total = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    total += std::max(0.0, p[i] - scale * q[i]);
  }
  return total;
}

// max over all 2^n events A of p(A) - e^eps q(A), by enumeration. Limited to
// n <= kMaxEnumeratedOutputs.
inline constexpr size_t kMaxEnumeratedOutputs = 20;

inline absl::StatusOr<double> SubsetEnumerationDefect(
    std::span<const double> p, std::span<const double> q, double epsilon) {
  if (auto status = internal::ValidateProbabilityPair(p, q, epsilon);
      !status.ok()) {
    return status;
  }
  if (p.size() > kMaxEnumeratedOutputs) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "subset enumeration supports at most %d outputs, got %d",
        kMaxEnumeratedOutputs, p.size()));
  }
  const double scale = std::exp(epsilon);
  double best = 0;  // the empty event
  const uint64_t events = uint64_t{1} << p.size();
  for (uint64_t mask = 1; mask < events; ++mask) {
    double p_mass = 0;
    double q_mass = 0;
    for (size_t i = 0; i < p.size(); ++i) {
      if (mask >> i & 1) {
        p_mass += p[i];
        q_mass += q[i];
      }
    }
    best = std::max(best, p_mass - scale * q_mass);
  }
  return best;
}

// delta_h for the radius-t truncated family of `kernel`: inputs 0 and h,
// leakage over offsets [-t, h-t-1] and overlap over [h-t, t]. Separations
// beyond 2t have disjoint windows and give exactly (1, 0, 1).
inline DefectBreakdown SeparationDefectBreakdown(const KernelFamily& kernel,
                                                 double epsilon,
                                                 int64_t radius, int64_t h) {
  if (h > 2 * radius) return {1.0, 0.0, 1.0};
  if (h <= 0) return {};
  const double normalizer = WindowNormalizer(kernel, radius);
  auto distance = [](int64_t k) { return static_cast<double>(k < 0 ? -k : k); };
  double leakage = 0;
  for (int64_t k = -radius; k <= h - radius - 1; ++k) {
    leakage += kernel.Weight(distance(k));
  }
  double overlap = 0;
  for (int64_t k = h - radius; k <= radius; ++k) {
    const double loss = kernel.LossExponent(distance(k), distance(k - h));
    overlap += internal::ExcessAbove(kernel.Weight(distance(k)), loss, epsilon);
  }
  return internal::MakeBreakdown(leakage / normalizer, overlap / normalizer);
}

inline double SeparationDefect(const KernelFamily& kernel, double epsilon,
                               int64_t radius, int64_t h) {
  return SeparationDefectBreakdown(kernel, epsilon, radius, h).total;
}

// Closed-form delta_h for the discrete-Laplace family. Requires lambda > 0.
inline double LaplaceSeparationDefect(double epsilon, double lambda,
                                      int64_t radius, int64_t h) {
  return SeparationDefect(KernelFamily::Laplace(lambda).value(), epsilon,
                          radius, h);
}

// Closed-form delta_h for the Gaussian family. Requires sigma > 0.
inline double GaussianSeparationDefect(double epsilon, double sigma,
                                       int64_t radius, int64_t h) {
  return SeparationDefect(KernelFamily::Gaussian(sigma).value(), epsilon,
                          radius, h);
}

struct WorstCaseDefect {
  double delta_star = 0;
  int64_t argmax_h = 0;  // smallest maximizing separation
};

// max_{0 <= h <= H} delta_h. Every h > 2t gives 1, so the scan stops at the
// first such h.
inline WorstCaseDefect ComputeWorstCaseDefect(const KernelFamily& kernel,
                                              double epsilon,
                                              int64_t support_size,
                                              int64_t range) {
  const int64_t t = (support_size - 1) / 2;
  WorstCaseDefect best;
  const int64_t last = std::min(range, 2 * t + 1);
  for (int64_t h = 1; h <= last; ++h) {
    const double delta = SeparationDefect(kernel, epsilon, t, h);
    if (delta > best.delta_star) best = {delta, h};
  }
  return best;
}

inline WorstCaseDefect ComputeWorstCaseDefect(const TruncatedParams& params) {
  return ComputeWorstCaseDefect(params.kernel(), params.epsilon(),
                                params.support_size(), params.range());
}

// kappa_h = h/2 - sigma^2 eps / h. On the overlap of the radius-t Gaussian
// windows at separation h, the summand at offset k is positive iff
// k < kappa_h.
inline absl::StatusOr<double> GaussianOverlapThreshold(int64_t h, double sigma,
                                                       double epsilon) {
  if (h <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("separation h must be positive, got %d", h));
  }
  const double hd = static_cast<double>(h);
  return hd / 2 - sigma * sigma * epsilon / hd;
}

}  // namespace sparse_ldp

#endif  // SPARSE_LDP_PRIVACY_H_
