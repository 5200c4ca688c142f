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

// Command-line driver. Exit codes are shared by every subcommand:
//   0  success
//   1  well-formed negative answer (design infeasible, channel not pure)
//   2  usage or validation error

#ifndef SPARSE_LDP_CLI_H_
#define SPARSE_LDP_CLI_H_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sparse_ldp/calibration.h"
#include "sparse_ldp/io/format.h"
#include "sparse_ldp/io/spec_json.h"
#include "sparse_ldp/kernel.h"
#include "sparse_ldp/privacy.h"
#include "sparse_ldp/sampling.h"
#include "sparse_ldp/truncated.h"

namespace sparse_ldp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

namespace internal {

struct CommonFlags {
  std::string format = "csv";
  std::string out_path;
};

struct KernelFlags {
  std::string family;
  double param = 0;
};

struct DefectFlags {
  KernelFlags kernel;
  int64_t s = 0;
  double epsilon = 0;
  int64_t range = 0;
  bool per_h = false;
};

struct DesignFlags {
  KernelFlags kernel;
  double epsilon = 0;
  double delta = 0;
  int64_t range = 0;
  std::optional<int64_t> s_max;
};

struct SweepFlags {
  std::string kind;
  KernelFlags kernel;
  double epsilon = 0;
  int64_t range = 0;
  int64_t s = 0;
  std::vector<double> values;
};

struct CheckPureFlags {
  std::string spec_path;
};

struct SampleFlags {
  KernelFlags kernel;
  int64_t s = 0;
  int64_t x = 0;
  int64_t n = 0;
  uint64_t seed = 0;
  bool histogram = false;
};

inline void AddKernelFlags(CLI::App* cmd, KernelFlags& flags,
                           bool with_param = true) {
  cmd->add_option("--family", flags.family, "Kernel family")
      ->required()
      ->check(CLI::IsMember({"laplace", "gaussian"}));
  if (with_param) {
    cmd->add_option("--param", flags.param,
                    "lambda (laplace) or sigma (gaussian)")
        ->required();
  }
}

inline void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "table"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out_path, "Write results to this file");
}

inline absl::StatusOr<KernelFamily> MakeKernel(const KernelFlags& flags) {
  auto kind = ParseKernelKind(flags.family);
  if (!kind.ok()) return kind.status();
  return KernelFamily::Create(*kind, flags.param);
}

inline int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return kExitUsage;
}

inline io::Cell Optional(const std::optional<double>& v) {
  return v ? io::Cell(*v) : io::Cell();
}
inline io::Cell Optional(const std::optional<int64_t>& v) {
  return v ? io::Cell(*v) : io::Cell();
}

inline int RunDefect(const DefectFlags& flags, io::OutputFormat format,
              std::ostream& out, std::ostream& err) {
  auto kernel = MakeKernel(flags.kernel);
  if (!kernel.ok()) return Fail(err, kernel.status());
  auto params =
      TruncatedParams::Create(*kernel, flags.s, flags.range, flags.epsilon);
  if (!params.ok()) return Fail(err, params.status());

  std::vector<io::Record> records;
  if (flags.per_h) {
    for (int64_t h = 0; h <= params->range(); ++h) {
      const DefectBreakdown b = SeparationDefectBreakdown(
          *kernel, params->epsilon(), params->radius(), h);
      records.push_back({{"h", h},
                         {"delta_h", b.total},
                         {"leakage", b.support_leakage},
                         {"overlap", b.overlap_excess}});
    }
    io::WriteRecords(out, records, format);
  } else {
    const WorstCaseDefect worst = ComputeWorstCaseDefect(*params);
    records.push_back(
        {{"delta_star", worst.delta_star}, {"argmax_h", worst.argmax_h}});
    io::WriteRecords(out, records, format, /*as_object=*/true);
  }
  return kExitOk;
}

inline int RunDesign(const DesignFlags& flags, io::OutputFormat format,
              std::ostream& out, std::ostream& err) {
  auto kernel = MakeKernel(flags.kernel);
  if (!kernel.ok()) return Fail(err, kernel.status());
  auto result = MinFeasibleSupport(*kernel, flags.epsilon, flags.delta,
                                   flags.range, flags.s_max);
  if (!result.ok()) return Fail(err, result.status());
  std::optional<double> r1, r2;
  if (result->moments) {
    r1 = result->moments->r1;
    r2 = result->moments->r2;
  }
  io::WriteRecords(out,
                   {{{"feasible", result->feasible},
                     {"s", Optional(result->s_chosen)},
                     {"delta_star", Optional(result->achieved_delta_star)},
                     {"r1", Optional(r1)},
                     {"r2", Optional(r2)},
                     {"s_scanned_max", result->s_scanned_max}}},
                   format, /*as_object=*/true);
  return result->feasible ? kExitOk : kExitNegative;
}

inline int RunSweep(const SweepFlags& flags, io::OutputFormat format,
             std::ostream& out, std::ostream& err) {
  if (flags.values.empty()) {
    return Fail(err, absl::InvalidArgumentError("--values must not be empty"));
  }
  absl::StatusOr<std::vector<SweepRow>> rows;
  if (flags.kind == "support") {
    auto kernel = MakeKernel(flags.kernel);
    if (!kernel.ok()) return Fail(err, kernel.status());
    std::vector<int64_t> sizes;
    for (double v : flags.values) {
      if (v != std::floor(v)) {
        return Fail(err, absl::InvalidArgumentError(
                             "support sweep values must be integers"));
      }
      sizes.push_back(static_cast<int64_t>(v));
    }
    rows = SweepSupport(*kernel, flags.epsilon, flags.range, sizes);
  } else {
    auto kind = ParseKernelKind(flags.kernel.family);
    if (!kind.ok()) return Fail(err, kind.status());
    rows = SweepParam(*kind, flags.values, flags.epsilon, flags.range,
                      flags.s);
  }
  if (!rows.ok()) return Fail(err, rows.status());

  std::vector<io::Record> records;
  for (const SweepRow& row : *rows) {
    io::Cell varied = row.varied;
    if (flags.kind == "support") varied = static_cast<int64_t>(row.varied);
    records.push_back({{"varied", varied},
                       {"delta_star", row.delta_star},
                       {"r1", row.r1},
                       {"r2", row.r2}});
  }
  io::WriteRecords(out, records, format);
  return kExitOk;
}

inline int RunCheckPure(const CheckPureFlags& flags, io::OutputFormat format,
                 std::ostream& out, std::ostream& err) {
  auto spec = io::LoadMechanismSpec(flags.spec_path);
  if (!spec.ok()) return Fail(err, spec.status());
  const PureLdpResult result = PureLdpEpsilon(*spec);
  io::Record record{{"finite", result.finite},
                    {"epsilon_star", result.finite ? io::Cell(result.epsilon_star)
                                                   : io::Cell()}};
  if (result.witness) {
    record.push_back({"witness_x", result.witness->x});
    record.push_back({"witness_x_prime", result.witness->x_prime});
    record.push_back({"witness_y", result.witness->y});
  } else {
    record.push_back({"witness_x", io::Cell()});
    record.push_back({"witness_x_prime", io::Cell()});
    record.push_back({"witness_y", io::Cell()});
  }
  io::WriteRecords(out, {record}, format, /*as_object=*/true);
  return result.finite ? kExitOk : kExitNegative;
}

inline int RunSample(const SampleFlags& flags, io::OutputFormat format,
              std::ostream& out, std::ostream& err) {
  if (flags.n < 0) {
    return Fail(err, absl::InvalidArgumentError("--n must be nonnegative"));
  }
  auto kernel = MakeKernel(flags.kernel);
  if (!kernel.ok()) return Fail(err, kernel.status());
  auto params = TruncatedParams::Create(*kernel, flags.s);
  if (!params.ok()) return Fail(err, params.status());
  const std::vector<int64_t> draws =
      Sample(*params, flags.x, flags.seed, static_cast<size_t>(flags.n));

  std::vector<io::Record> records;
  if (flags.histogram) {
    std::map<int64_t, int64_t> counts;
    for (int64_t y : draws) ++counts[y];
    for (const Atom& atom : TruncatedPmf(*params, flags.x)) {
      const int64_t count = counts[atom.output];
      records.push_back(
          {{"output", atom.output},
           {"count", count},
           {"frequency", draws.empty() ? 0.0
                                       : static_cast<double>(count) /
                                             static_cast<double>(draws.size())},
           {"pmf", atom.probability}});
    }
  } else {
    records.reserve(draws.size());
    for (int64_t y : draws) records.push_back({{"sample", y}});
  }
  if (records.empty() && format == io::OutputFormat::kCsv) {
    out << (flags.histogram ? "output,count,frequency,pmf" : "sample") << "\n";
    return kExitOk;
  }
  io::WriteRecords(out, records, format);
  return kExitOk;
}

}  // namespace internal

// Parses argv, runs one subcommand and returns its exit code. Results go to
// `out` (or the --out file), diagnostics to `err`.
inline int RunCli(int argc, const char* const* argv, std::ostream& out,
                  std::ostream& err) {
  using namespace internal;
  CLI::App app{"Exact privacy accounting and support-size calibration for "
               "sparse discrete-Laplace and Gaussian channels",
               "sparse_ldp"};
  app.require_subcommand(1);

  CommonFlags common;
  DefectFlags defect;
  DesignFlags design;
  SweepFlags sweep;
  CheckPureFlags check;
  SampleFlags sample;

  auto* defect_cmd =
      app.add_subcommand("defect", "Worst-case privacy defect over range H");
  AddKernelFlags(defect_cmd, defect.kernel);
  defect_cmd->add_option("--s", defect.s, "Odd support size")->required();
  defect_cmd->add_option("--eps", defect.epsilon, "Epsilon")->required();
  defect_cmd->add_option("--range", defect.range, "Privacy range H")
      ->required();
  defect_cmd->add_flag("--per-h", defect.per_h,
                       "One row per separation h = 0..H");
  AddCommonFlags(defect_cmd, common);

  auto* design_cmd = app.add_subcommand(
      "design", "Smallest support size meeting a (eps, delta) target");
  AddKernelFlags(design_cmd, design.kernel);
  design_cmd->add_option("--eps", design.epsilon, "Epsilon")->required();
  design_cmd->add_option("--delta", design.delta, "Target delta in (0, 1]")
      ->required();
  design_cmd->add_option("--range", design.range, "Privacy range H")
      ->required();
  design_cmd->add_option("--s-max", design.s_max,
                         "Largest odd support size to scan");
  AddCommonFlags(design_cmd, common);

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Tabulate (delta*, R1, R2) over support sizes or parameters");
  sweep_cmd->add_option("kind", sweep.kind, "support or param")
      ->required()
      ->check(CLI::IsMember({"support", "param"}));
  AddKernelFlags(sweep_cmd, sweep.kernel, /*with_param=*/false);
  auto* sweep_param = sweep_cmd->add_option(
      "--param", sweep.kernel.param, "Kernel parameter (support sweep)");
  auto* sweep_s =
      sweep_cmd->add_option("--s", sweep.s, "Odd support size (param sweep)");
  sweep_cmd->add_option("--eps", sweep.epsilon, "Epsilon")->required();
  sweep_cmd->add_option("--range", sweep.range, "Privacy range H")
      ->required();
  sweep_cmd
      ->add_option("--values", sweep.values,
                   "Comma-separated support sizes or kernel parameters")
      ->required()
      ->delimiter(',');
  AddCommonFlags(sweep_cmd, common);

  auto* check_cmd = app.add_subcommand(
      "check-pure", "Exact pure-LDP level of a mechanism spec (JSON)");
  check_cmd->add_option("spec", check.spec_path, "Mechanism spec JSON file")
      ->required();
  AddCommonFlags(check_cmd, common);

  auto* sample_cmd =
      app.add_subcommand("sample", "Draw outputs from an s-sparse channel");
  AddKernelFlags(sample_cmd, sample.kernel);
  sample_cmd->add_option("--s", sample.s, "Odd support size")->required();
  sample_cmd->add_option("--x", sample.x, "Input value")->required();
  sample_cmd->add_option("--n", sample.n, "Number of draws")->required();
  sample_cmd->add_option("--seed", sample.seed, "RNG seed")
      ->capture_default_str();
  sample_cmd->add_flag("--histogram", sample.histogram,
                       "Aggregate draws against the pmf");
  AddCommonFlags(sample_cmd, common);

  try {
    app.parse(argc, argv);
    if (sweep_cmd->parsed()) {
      if (sweep.kind == "support" && sweep_param->count() == 0) {
        throw CLI::RequiredError("--param is required for a support sweep");
      }
      if (sweep.kind == "param" && sweep_s->count() == 0) {
        throw CLI::RequiredError("--s is required for a param sweep");
      }
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto format = io::ParseOutputFormat(common.format);
  if (!format.ok()) return Fail(err, format.status());

  std::ofstream file;
  std::ostream* sink = &out;
  if (!common.out_path.empty()) {
    file.open(common.out_path);
    if (!file) {
      return Fail(err, absl::InvalidArgumentError(
                           "cannot open output file " + common.out_path));
    }
    sink = &file;
  }

  if (defect_cmd->parsed()) return RunDefect(defect, *format, *sink, err);
  if (design_cmd->parsed()) return RunDesign(design, *format, *sink, err);
  if (sweep_cmd->parsed()) return RunSweep(sweep, *format, *sink, err);
  if (check_cmd->parsed()) return RunCheckPure(check, *format, *sink, err);
  return RunSample(sample, *format, *sink, err);
}

}  // namespace sparse_ldp::cli

#endif  // SPARSE_LDP_CLI_H_
