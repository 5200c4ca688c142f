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

// Support-size calibration for the truncated families: feasibility limits,
// leakage-only ("clean") bounds, sufficient support sizes and the exact
// minimum-support design search.

#ifndef SPARSE_LDP_CALIBRATION_H_
#define SPARSE_LDP_CALIBRATION_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sparse_ldp/kernel.h"
#include "sparse_ldp/privacy.h"
#include "sparse_ldp/truncated.h"

namespace sparse_ldp {

struct CleanBoundReport {
  bool applicable = false;
  bool condition_overlap = false;
  bool condition_size = false;
  std::optional<double> exact_leakage_delta;
  std::optional<double> upper_bound;
};

struct DesignResult {
  bool feasible = false;
  std::optional<int64_t> s_chosen;
  std::optional<double> achieved_delta_star;
  std::optional<DistortionMoments> moments;
  int64_t s_scanned_max = 0;
};

struct SweepRow {
  double varied = 0;
  double delta_star = 0;
  double r1 = 0;
  double r2 = 0;
};

// Smallest odd integer >= value.
inline int64_t CeilToOdd(double value) {
  const int64_t n = static_cast<int64_t>(std::ceil(value));
  return n % 2 == 0 ? n + 1 : n;
}

// Largest odd integer <= value.
inline int64_t FloorToOdd(double value) {
  const int64_t n = static_cast<int64_t>(std::floor(value));
  return n % 2 == 0 ? n - 1 : n;
}

// Below s = H + 1 the windows of two inputs H apart are disjoint and the
// defect is 1, so this is the smallest odd s worth considering.
inline int64_t FeasibilityMinSupport(int64_t range) {
  return CeilToOdd(static_cast<double>(range + 1));
}

namespace internal {

inline absl::Status ValidateCalibrationArgs(double epsilon, int64_t range) {
  if (!std::isfinite(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be finite and nonnegative, got %g", epsilon));
  }
  if (range < 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "privacy range H must be nonnegative, got %d", range));
  }
  return absl::OkStatus();
}

// Leakage-only defect at separation h: (1/C_t) sum_{j=t-h+1}^{t} w(j).
inline double LeakageOnlyDefect(const KernelFamily& kernel, int64_t radius,
                                int64_t h) {
  double sum = 0;
  for (int64_t j = radius - h + 1; j <= radius; ++j) {
    sum += kernel.Weight(static_cast<double>(j));
  }
  return sum / WindowNormalizer(kernel, radius);
}

// Overlap condition for the Gaussian family: eps >= H(2t - H) / (2 sigma^2).
inline bool GaussianOverlapVanishes(double epsilon, double sigma,
                                    int64_t radius, int64_t range) {
  const double numerator = static_cast<double>(range * (2 * radius - range));
  return epsilon >= numerator / (2 * sigma * sigma);
}

inline double GaussianLeakageBound(double sigma, int64_t radius,
                                   int64_t range) {
  const double gap = static_cast<double>(radius - range + 1);
  return static_cast<double>(range) *
         std::exp(-gap * gap / (2 * sigma * sigma));
}

inline double LaplaceLeakageBound(double lambda, int64_t radius,
                                  int64_t range) {
  return static_cast<double>(range) *
         std::exp(-lambda * static_cast<double>(radius - range + 1));
}

inline CleanBoundReport FinishCleanBound(const KernelFamily& kernel,
                                         bool condition_overlap,
                                         bool condition_size, int64_t radius,
                                         int64_t range, double upper_bound) {
  CleanBoundReport report;
  report.condition_overlap = condition_overlap;
  report.condition_size = condition_size;
  report.applicable = condition_overlap && condition_size;
  if (!report.applicable) return report;
  if (range == 0) {
    report.exact_leakage_delta = 0.0;
    report.upper_bound = 0.0;
    return report;
  }
  // The leakage sum only grows with h, so h = H is the maximizer.
  report.exact_leakage_delta = LeakageOnlyDefect(kernel, radius, range);
  report.upper_bound = upper_bound;
  return report;
}

}  // namespace internal

// Leakage-only regime of the Laplace family: lambda H <= eps and
// s >= 2H + 1. Inapplicability is reported, not treated as an error.
inline absl::StatusOr<CleanBoundReport> LaplaceCleanBound(double epsilon,
                                                          double lambda,
                                                          int64_t s,
                                                          int64_t range) {
  auto kernel = KernelFamily::Laplace(lambda);
  if (!kernel.ok()) return kernel.status();
  if (auto status = ValidateSupportSize(s); !status.ok()) return status;
  if (auto status = internal::ValidateCalibrationArgs(epsilon, range);
      !status.ok()) {
    return status;
  }
  const int64_t t = (s - 1) / 2;
  return internal::FinishCleanBound(
      *kernel, lambda * static_cast<double>(range) <= epsilon,
      s >= 2 * range + 1, t, range,
      internal::LaplaceLeakageBound(lambda, t, range));
}

inline absl::StatusOr<CleanBoundReport> GaussianCleanBound(double epsilon,
                                                           double sigma,
                                                           int64_t s,
                                                           int64_t range) {
  auto kernel = KernelFamily::Gaussian(sigma);
  if (!kernel.ok()) return kernel.status();
  if (auto status = ValidateSupportSize(s); !status.ok()) return status;
  if (auto status = internal::ValidateCalibrationArgs(epsilon, range);
      !status.ok()) {
    return status;
  }
  const int64_t t = (s - 1) / 2;
  return internal::FinishCleanBound(
      *kernel, internal::GaussianOverlapVanishes(epsilon, sigma, t, range),
      s >= 2 * range + 1, t, range,
      internal::GaussianLeakageBound(sigma, t, range));
}

inline absl::StatusOr<CleanBoundReport> CleanBound(
    const TruncatedParams& params) {
  const auto& kernel = params.kernel();
  return kernel.is_laplace()
             ? LaplaceCleanBound(params.epsilon(), kernel.param(),
                                 params.support_size(), params.range())
             : GaussianCleanBound(params.epsilon(), kernel.param(),
                                  params.support_size(), params.range());
}

// Smallest odd s with s >= 2H - 1 + (2/lambda) log(H/delta) and
// s >= 2H + 1. Valid only in the Laplace leakage-only regime lambda H <= eps.
inline absl::StatusOr<int64_t> LaplaceSufficientSupport(double epsilon,
                                                        double delta,
                                                        double lambda,
                                                        int64_t range) {
  if (auto kernel = KernelFamily::Laplace(lambda); !kernel.ok()) {
    return kernel.status();
  }
  if (auto status = internal::ValidateCalibrationArgs(epsilon, range);
      !status.ok()) {
    return status;
  }
  if (range < 1) {
    return absl::InvalidArgumentError("privacy range H must be at least 1");
  }
  if (!(delta > 0 && delta <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1], got %g", delta));
  }
  const double h = static_cast<double>(range);
  if (lambda * h > epsilon) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "lambda * H = %g exceeds epsilon = %g; overlap loss does not vanish",
        lambda * h, epsilon));
  }
  int64_t s = std::max(CeilToOdd(2 * h - 1 + 2 / lambda * std::log(h / delta)),
                       2 * range + 1);
  // Guard the rounding of the closed form with the bound it came from.
  while (internal::LaplaceLeakageBound(lambda, (s - 1) / 2, range) > delta) {
    s += 2;
  }
  return s;
}

// Odd support sizes [lo, hi] certified by the Gaussian leakage-only bound.
struct SupportWindow {
  int64_t lo;
  int64_t hi;
};

// Returns std::nullopt when the window is empty. log(H / delta) is clamped at
// 0, so delta >= H gives lo = 2H + 1.
inline absl::StatusOr<std::optional<SupportWindow>> GaussianSupportWindow(
    double epsilon, double delta, double sigma, int64_t range) {
  if (auto kernel = KernelFamily::Gaussian(sigma); !kernel.ok()) {
    return kernel.status();
  }
  if (auto status = internal::ValidateCalibrationArgs(epsilon, range);
      !status.ok()) {
    return status;
  }
  if (range < 1) {
    return absl::InvalidArgumentError("privacy range H must be at least 1");
  }
  if (!(delta > 0) || !std::isfinite(delta)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must be positive, got %g", delta));
  }
  const double h = static_cast<double>(range);
  const double variance = sigma * sigma;
  const double log_term = std::max(0.0, std::log(h / delta));
  int64_t lo = std::max(CeilToOdd(2 * h - 1 + 2 * std::sqrt(2 * variance *
                                                            log_term)),
                        2 * range + 1);
  int64_t hi = FloorToOdd(h + 1 + 2 * variance * epsilon / h);
  // Snap both ends to the exact conditions they stand for.
  while (internal::GaussianLeakageBound(sigma, (lo - 1) / 2, range) > delta) {
    lo += 2;
  }
  while (hi >= 1 &&
         !internal::GaussianOverlapVanishes(epsilon, sigma, (hi - 1) / 2,
                                            range)) {
    hi -= 2;
  }
  if (lo > hi) return std::nullopt;
  return SupportWindow{lo, hi};
}

// 2H + 1 + ceil(40 / lambda) for Laplace, 2H + 1 + ceil(8 sigma^2) + 2H for
// Gaussian, rounded up to odd.
inline int64_t DefaultMaxSupport(const KernelFamily& kernel, int64_t range) {
  const double base = static_cast<double>(2 * range + 1);
  const double p = kernel.param();
  if (kernel.is_laplace()) return CeilToOdd(base + std::ceil(40 / p));
  return CeilToOdd(base + std::ceil(8 * p * p) + static_cast<double>(2 * range));
}

// Smallest odd s whose exact worst-case defect is at most delta, found by an
// ascending scan up to s_max. Sizes below H + 1 have defect exactly 1 and are
// skipped unless delta = 1.
inline absl::StatusOr<DesignResult> MinFeasibleSupport(
    const KernelFamily& kernel, double epsilon, double delta, int64_t range,
    std::optional<int64_t> s_max = std::nullopt) {
  if (auto status = internal::ValidateCalibrationArgs(epsilon, range);
      !status.ok()) {
    return status;
  }
  if (!(delta > 0 && delta <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1], got %g", delta));
  }
  const int64_t limit = s_max.value_or(DefaultMaxSupport(kernel, range));
  if (auto status = ValidateSupportSize(limit); !status.ok()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("s_max must be an odd positive integer, got %d",
                        limit));
  }
  DesignResult result;
  result.s_scanned_max = limit;
  const int64_t first = delta >= 1 ? 1 : FeasibilityMinSupport(range);
  for (int64_t s = first; s <= limit; s += 2) {
    const WorstCaseDefect worst =
        ComputeWorstCaseDefect(kernel, epsilon, s, range);
    if (worst.delta_star <= delta) {
      result.feasible = true;
      result.s_chosen = s;
      result.achieved_delta_star = worst.delta_star;
      result.moments = ComputeDistortionMoments(kernel, s);
      break;
    }
  }
  return result;
}

inline absl::StatusOr<std::vector<SweepRow>> SweepSupport(
    const KernelFamily& kernel, double epsilon, int64_t range,
    std::span<const int64_t> support_sizes) {
  if (auto status = internal::ValidateCalibrationArgs(epsilon, range);
      !status.ok()) {
    return status;
  }
  std::vector<SweepRow> rows;
  rows.reserve(support_sizes.size());
  for (int64_t s : support_sizes) {
    if (auto status = ValidateSupportSize(s); !status.ok()) return status;
    const auto moments = ComputeDistortionMoments(kernel, s);
    rows.push_back({static_cast<double>(s),
                    ComputeWorstCaseDefect(kernel, epsilon, s, range)
                        .delta_star,
                    moments.r1, moments.r2});
  }
  return rows;
}

inline absl::StatusOr<std::vector<SweepRow>> SweepParam(
    KernelKind kind, std::span<const double> params, double epsilon,
    int64_t range, int64_t s) {
  if (auto status = internal::ValidateCalibrationArgs(epsilon, range);
      !status.ok()) {
    return status;
  }
  if (auto status = ValidateSupportSize(s); !status.ok()) return status;
  std::vector<SweepRow> rows;
  rows.reserve(params.size());
  for (double param : params) {
    auto kernel = KernelFamily::Create(kind, param);
    if (!kernel.ok()) return kernel.status();
    const auto moments = ComputeDistortionMoments(*kernel, s);
    rows.push_back(
        {param, ComputeWorstCaseDefect(*kernel, epsilon, s, range).delta_star,
         moments.r1, moments.r2});
  }
  return rows;
}

}  // namespace sparse_ldp

#endif  // SPARSE_LDP_CALIBRATION_H_
