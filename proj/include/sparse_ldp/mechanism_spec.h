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

#ifndef SPARSE_LDP_MECHANISM_SPEC_H_
#define SPARSE_LDP_MECHANISM_SPEC_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sparse_ldp/kernel.h"

namespace sparse_ldp {

// One output symbol together with its probability.
struct Atom {
  int64_t output;
  double probability;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// A probability mass function over integer outputs, sorted by output and
// holding only positive-mass atoms.
using Pmf = std::vector<Atom>;

// d(x, y) = |x - y|.
struct AbsoluteDifference {};

// d(x, y) read from a table indexed by (input position, output position).
struct ExplicitMatrix {
  std::vector<std::vector<double>> values;
};

using DistanceModel = std::variant<AbsoluteDifference, ExplicitMatrix>;

// A sparse channel: each input x emits y in S(x) with probability
// proportional to the kernel weight of d(x, y).
class MechanismSpec {
 public:
  // Checks every structural invariant. Supports are keyed by input value;
  // each must be a nonempty subset of `outputs`. Inputs and outputs are
  // stored sorted.
  static absl::StatusOr<MechanismSpec> Create(
      KernelFamily kernel, std::vector<int64_t> inputs,
      std::vector<int64_t> outputs,
      std::map<int64_t, std::vector<int64_t>> supports,
      DistanceModel distance = AbsoluteDifference{}) {
    if (inputs.empty()) {
      return absl::InvalidArgumentError("inputs must be nonempty");
    }
    if (outputs.empty()) {
      return absl::InvalidArgumentError("outputs must be nonempty");
    }
    // Matrix rows and columns follow the caller's ordering, so remember it
    // before sorting.
    const std::vector<int64_t> input_order = inputs;
    const std::vector<int64_t> output_order = outputs;
    std::sort(inputs.begin(), inputs.end());
    std::sort(outputs.begin(), outputs.end());
    if (std::adjacent_find(inputs.begin(), inputs.end()) != inputs.end()) {
      return absl::InvalidArgumentError("inputs contain a duplicate value");
    }
    if (std::adjacent_find(outputs.begin(), outputs.end()) != outputs.end()) {
      return absl::InvalidArgumentError("outputs contain a duplicate value");
    }

    MechanismSpec spec(std::move(kernel));
    spec.inputs_ = std::move(inputs);
    spec.outputs_ = std::move(outputs);

    for (const auto& [x, support] : supports) {
      if (!std::binary_search(spec.inputs_.begin(), spec.inputs_.end(), x)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("support given for unknown input %d", x));
      }
    }
    spec.supports_.reserve(spec.inputs_.size());
    for (int64_t x : spec.inputs_) {
      auto it = supports.find(x);
      if (it == supports.end() || it->second.empty()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("support of input %d is missing or empty", x));
      }
      std::vector<int64_t> support = std::move(it->second);
      std::sort(support.begin(), support.end());
      if (std::adjacent_find(support.begin(), support.end()) !=
          support.end()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("support of input %d has a duplicate output", x));
      }
      for (int64_t y : support) {
        if (!std::binary_search(spec.outputs_.begin(), spec.outputs_.end(),
                                y)) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "support of input %d contains %d, which is not an output", x,
              y));
        }
      }
      spec.supports_.push_back(std::move(support));
    }

    if (auto* matrix = std::get_if<ExplicitMatrix>(&distance)) {
      if (matrix->values.size() != input_order.size()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "distance matrix has %d rows, expected one per input (%d)",
            matrix->values.size(), input_order.size()));
      }
      // Re-key rows and columns to sorted order.
      std::vector<std::vector<double>> sorted(
          spec.inputs_.size(), std::vector<double>(spec.outputs_.size()));
      for (size_t r = 0; r < input_order.size(); ++r) {
        const auto& row = matrix->values[r];
        if (row.size() != output_order.size()) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "distance matrix row %d has %d entries, expected %d", r,
              row.size(), output_order.size()));
        }
        const size_t i = spec.InputIndex(input_order[r]);
        for (size_t c = 0; c < output_order.size(); ++c) {
          const double v = row[c];
          if (!std::isfinite(v) || v < 0) {
            return absl::InvalidArgumentError(absl::StrFormat(
                "distance d(%d, %d) must be finite and nonnegative",
                input_order[r], output_order[c]));
          }
          if (input_order[r] == output_order[c] && v != 0) {
            return absl::InvalidArgumentError(absl::StrFormat(
                "distance d(%d, %d) must be 0", input_order[r],
                output_order[c]));
          }
          sorted[i][spec.OutputIndex(output_order[c])] = v;
        }
      }
      spec.distance_ = ExplicitMatrix{std::move(sorted)};
    }
    return spec;
  }

  const KernelFamily& kernel() const { return kernel_; }
  const std::vector<int64_t>& inputs() const { return inputs_; }
  const std::vector<int64_t>& outputs() const { return outputs_; }
  const DistanceModel& distance_model() const { return distance_; }

  bool HasInput(int64_t x) const {
    return std::binary_search(inputs_.begin(), inputs_.end(), x);
  }

  // Sorted support S(x).
  absl::StatusOr<std::vector<int64_t>> Support(int64_t x) const {
    if (!HasInput(x)) return InputNotFound(x);
    return supports_[InputIndex(x)];
  }

  // d(x, y) for a known input and output.
  double Distance(int64_t x, int64_t y) const {
    if (const auto* matrix = std::get_if<ExplicitMatrix>(&distance_)) {
      return matrix->values[InputIndex(x)][OutputIndex(y)];
    }
    return std::abs(static_cast<double>(x) - static_cast<double>(y));
  }

  static absl::Status InputNotFound(int64_t x) {
    return absl::NotFoundError(absl::StrFormat("input %d not found", x));
  }

 private:
  explicit MechanismSpec(KernelFamily kernel) : kernel_(std::move(kernel)) {}

  size_t InputIndex(int64_t x) const {
    return std::lower_bound(inputs_.begin(), inputs_.end(), x) -
           inputs_.begin();
  }
  size_t OutputIndex(int64_t y) const {
    return std::lower_bound(outputs_.begin(), outputs_.end(), y) -
           outputs_.begin();
  }

  KernelFamily kernel_;
  std::vector<int64_t> inputs_;
  std::vector<int64_t> outputs_;
  std::vector<std::vector<int64_t>> supports_;  // parallel to inputs_
  DistanceModel distance_ = AbsoluteDifference{};
};

// Z_x (Laplace) or W_x (Gaussian): the kernel weights summed over S(x) in
// ascending output order.
inline absl::StatusOr<double> Normalizer(const MechanismSpec& spec,
                                         int64_t x) {
  auto support = spec.Support(x);
  if (!support.ok()) return support.status();
  double total = 0;
  for (int64_t y : *support) total += spec.kernel().Weight(spec.Distance(x, y));
  return total;
}

namespace internal {

// Weights over S(x) scaled by exp(m), m the smallest exponent on the support,
// so that far-away supports do not underflow to an all-zero sum.
struct ShiftedWeights {
  double shift = 0;
  std::vector<double> weights;
  double total = 0;
};

inline ShiftedWeights ComputeShiftedWeights(const MechanismSpec& spec,
                                            int64_t x,
                                            const std::vector<int64_t>& support) {
  ShiftedWeights out;
  std::vector<double> exponents;
  exponents.reserve(support.size());
  for (int64_t y : support) {
    exponents.push_back(spec.kernel().Exponent(spec.Distance(x, y)));
  }
  out.shift = *std::min_element(exponents.begin(), exponents.end());
  out.weights.reserve(support.size());
  for (double e : exponents) {
    out.weights.push_back(std::exp(out.shift - e));
    out.total += out.weights.back();
  }
  return out;
}

}  // namespace internal

// log Z_x, finite even when Z_x itself underflows.
inline absl::StatusOr<double> LogNormalizer(const MechanismSpec& spec,
                                            int64_t x) {
  auto support = spec.Support(x);
  if (!support.ok()) return support.status();
  const auto shifted = internal::ComputeShiftedWeights(spec, x, *support);
  return std::log(shifted.total) - shifted.shift;
}

inline absl::StatusOr<Pmf> ComputePmf(const MechanismSpec& spec, int64_t x) {
  auto support = spec.Support(x);
  if (!support.ok()) return support.status();
  const auto shifted = internal::ComputeShiftedWeights(spec, x, *support);
  Pmf pmf;
  pmf.reserve(support->size());
  for (size_t i = 0; i < support->size(); ++i) {
    pmf.push_back({(*support)[i], shifted.weights[i] / shifted.total});
  }
  return pmf;
}

// Probability of `y` under `pmf`, or 0 when y is off the support.
inline double MassAt(const Pmf& pmf, int64_t y) {
  auto it = std::lower_bound(
      pmf.begin(), pmf.end(), y,
      [](const Atom& atom, int64_t value) { return atom.output < value; });
  return it != pmf.end() && it->output == y ? it->probability : 0.0;
}

}  // namespace sparse_ldp

#endif  // SPARSE_LDP_MECHANISM_SPEC_H_
