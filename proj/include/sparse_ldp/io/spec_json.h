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

// MechanismSpec documents:
//
//   {
//     "kernel":   {"family": "laplace" | "gaussian", "param": <number>},
//     "inputs":   [<int>, ...],
//     "outputs":  [<int>, ...],
//     "supports": {"<input>": [<int>, ...], ...},
//     "distance": {"type": "abs"} | {"type": "matrix", "values": [[...]]}
//   }
//
// "distance" is optional and defaults to abs. Matrix rows follow "inputs"
// and columns follow "outputs" in document order.

#ifndef SPARSE_LDP_IO_SPEC_JSON_H_
#define SPARSE_LDP_IO_SPEC_JSON_H_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "sparse_ldp/kernel.h"
#include "sparse_ldp/mechanism_spec.h"

namespace sparse_ldp::io {

namespace internal {

using Json = nlohmann::json;

inline absl::Status SchemaError(absl::string_view field, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrFormat("field '%s': %s", field, what));
}

inline absl::StatusOr<std::vector<int64_t>> IntList(const Json& doc,
                                                    absl::string_view field) {
  if (!doc.is_array()) return SchemaError(field, "expected an array");
  std::vector<int64_t> out;
  for (const auto& v : doc) {
    if (!v.is_number_integer()) {
      return SchemaError(field, "expected integers only");
    }
    out.push_back(v.get<int64_t>());
  }
  return out;
}

inline absl::StatusOr<int64_t> ParseIntKey(const std::string& key) {
  int64_t value = 0;
  const char* end = key.data() + key.size();
  auto [ptr, ec] = std::from_chars(key.data(), end, value);
  if (ec != std::errc() || ptr != end || key.empty()) {
    return SchemaError("supports",
                       absl::StrFormat("key '%s' is not an integer", key));
  }
  return value;
}

}  // namespace internal

inline absl::StatusOr<MechanismSpec> ParseMechanismSpec(
    absl::string_view text) {
  using internal::Json;
  using internal::SchemaError;
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("document is not valid JSON");
  }
  if (!doc.is_object()) return SchemaError("<root>", "expected an object");
  for (const char* field : {"kernel", "inputs", "outputs", "supports"}) {
    if (!doc.contains(field)) return SchemaError(field, "missing");
  }

  const Json& kernel_doc = doc["kernel"];
  if (!kernel_doc.is_object() || !kernel_doc.contains("family") ||
      !kernel_doc["family"].is_string()) {
    return SchemaError("kernel.family", "expected a string");
  }
  if (!kernel_doc.contains("param") || !kernel_doc["param"].is_number()) {
    return SchemaError("kernel.param", "expected a number");
  }
  auto kind = ParseKernelKind(kernel_doc["family"].get<std::string>());
  if (!kind.ok()) return SchemaError("kernel.family", kind.status().message());
  auto kernel = KernelFamily::Create(*kind, kernel_doc["param"].get<double>());
  if (!kernel.ok()) return SchemaError("kernel.param", kernel.status().message());

  auto inputs = internal::IntList(doc["inputs"], "inputs");
  if (!inputs.ok()) return inputs.status();
  auto outputs = internal::IntList(doc["outputs"], "outputs");
  if (!outputs.ok()) return outputs.status();

  const Json& supports_doc = doc["supports"];
  if (!supports_doc.is_object()) {
    return SchemaError("supports", "expected an object keyed by input");
  }
  std::map<int64_t, std::vector<int64_t>> supports;
  for (const auto& [key, value] : supports_doc.items()) {
    auto x = internal::ParseIntKey(key);
    if (!x.ok()) return x.status();
    auto support = internal::IntList(value, "supports." + key);
    if (!support.ok()) return support.status();
    supports[*x] = *std::move(support);
  }

  DistanceModel distance = AbsoluteDifference{};
  if (doc.contains("distance")) {
    const Json& d = doc["distance"];
    if (!d.is_object() || !d.contains("type") || !d["type"].is_string()) {
      return SchemaError("distance.type", "expected \"abs\" or \"matrix\"");
    }
    const std::string type = d["type"].get<std::string>();
    if (type == "matrix") {
      if (!d.contains("values") || !d["values"].is_array()) {
        return SchemaError("distance.values", "expected an array of rows");
      }
      ExplicitMatrix matrix;
      for (const auto& row : d["values"]) {
        if (!row.is_array()) {
          return SchemaError("distance.values", "expected an array of rows");
        }
        std::vector<double> parsed;
        for (const auto& v : row) {
          if (!v.is_number()) {
            return SchemaError("distance.values", "expected numbers");
          }
          parsed.push_back(v.get<double>());
        }
        matrix.values.push_back(std::move(parsed));
      }
      distance = std::move(matrix);
    } else if (type != "abs") {
      return SchemaError("distance.type",
                         absl::StrFormat("unknown type '%s'", type));
    }
  }

  return MechanismSpec::Create(*kernel, *std::move(inputs),
                               *std::move(outputs), std::move(supports),
                               std::move(distance));
}

inline absl::StatusOr<MechanismSpec> LoadMechanismSpec(
    const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  return ParseMechanismSpec(buffer.str());
}

}  // namespace sparse_ldp::io

#endif  // SPARSE_LDP_IO_SPEC_JSON_H_
