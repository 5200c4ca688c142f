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

#ifndef SPARSE_LDP_SAMPLING_H_
#define SPARSE_LDP_SAMPLING_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "absl/status/statusor.h"
#include "sparse_ldp/mechanism_spec.h"
#include "sparse_ldp/truncated.h"

namespace sparse_ldp {

// Inverse-CDF sampling over the atoms in ascending output order. A uniform
// draw u in [0, 1) selects the atom whose interval [F(y-), F(y)) contains it;
// the last atom absorbs any rounding shortfall in the cumulative sum.
//
// Uniforms are built from the top 53 bits of mt19937_64 rather than
// std::uniform_real_distribution, whose output is implementation-defined.
inline std::vector<int64_t> SampleFromPmf(const Pmf& pmf, uint64_t seed,
                                          size_t n) {
  std::vector<int64_t> draws;
  if (pmf.empty()) return draws;
  std::vector<double> cumulative(pmf.size());
  double running = 0;
  for (size_t i = 0; i < pmf.size(); ++i) {
    running += pmf[i].probability;
    cumulative[i] = running;
  }
  std::mt19937_64 rng(seed);
  draws.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const size_t j = std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                     cumulative.begin();
    draws.push_back(pmf[std::min(j, pmf.size() - 1)].output);
  }
  return draws;
}

inline absl::StatusOr<std::vector<int64_t>> Sample(const MechanismSpec& spec,
                                                   int64_t x, uint64_t seed,
                                                   size_t n) {
  auto pmf = ComputePmf(spec, x);
  if (!pmf.ok()) return pmf.status();
  return SampleFromPmf(*pmf, seed, n);
}

inline std::vector<int64_t> Sample(const TruncatedParams& params, int64_t x,
                                   uint64_t seed, size_t n) {
  return SampleFromPmf(TruncatedPmf(params, x), seed, n);
}

}  // namespace sparse_ldp

#endif  // SPARSE_LDP_SAMPLING_H_
