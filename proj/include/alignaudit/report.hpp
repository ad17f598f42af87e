// Copyright 2026 The alignaudit Authors.
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

// Run manifests and report emission.
//
// A run directory holds
//   manifest.json     config snapshot, input digests, template ids, seed
//   transcript.jsonl  every model call
//   report.json       manifest + aggregates + per-record results
//   summary.csv, tiers.csv | recall.csv | agreement.csv, triage.csv
//
// report.json carries nothing that varies between identical runs (no
// timestamps, latencies or cache sources), so a replay reproduces it byte
// for byte. Undefined metrics are null in JSON and "undefined" in CSV.

#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignaudit/tasks.hpp"

namespace alignaudit {

struct InputRef {
  std::string role;    // skills, items, pairs, exemplars
  std::string path;    // relative to the run directory when possible
  std::string sha256;
};

struct RunManifest {
  std::string tool_version;
  RunConfig config;
  std::vector<InputRef> inputs;
  std::vector<std::string> template_ids;
  std::string transcript = "transcript.jsonl";
  std::string backend;
  nlohmann::json embedder;  // provider settings for filtered runs, null otherwise
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

std::string tool_version();

/// Resolves an input path recorded in a manifest against its run directory.
std::filesystem::path resolve_input(const std::filesystem::path& run_dir, const InputRef& ref);
/// Throws DigestMismatch when a file differs from the recorded digest.
void verify_inputs(const std::filesystem::path& run_dir, const RunManifest& m);

using RunResult = std::variant<BinaryRun, OpenSetRun, EnsembleRun>;

nlohmann::json report_json(const RunManifest& m, const RunResult& result);

/// Reads a report back; aggregates are recomputed from its records.
std::pair<RunManifest, RunResult> read_report(const std::filesystem::path& report_path);

// CSV tables. Column sets are fixed per table.
//
// summary.csv, binary runs:
//   scope,grade,subject,n,scored,unparseable,errors,tp,tn,fp,fn,
//   accuracy,precision,recall,specificity,f1,fp_rate,fn_rate
// summary.csv, top-k runs:
//   scope,grade,subject,k,n,hits,unparseable,errors,retrieval_misses,
//   accuracy,accuracy_parsed_only,retrieval_recall
//   (retrieval_recall is recall@filter_n; empty for unfiltered runs)
// summary.csv, ensembles:
//   repeat,scored,tp,tn,fp,fn,accuracy,precision,recall,specificity,f1
//   then rows "mean" and "stddev" carrying f1 only
// tiers.csv (binary and ensemble): scope,grade,subject,tier,scored,correct,accuracy
// recall.csv (filtered): scope,grade,subject,cutoff,n,hits,recall
// agreement.csv (ensemble):
//   item_id,skill_id,truth,tier,aligned,misaligned,no_verdict,agreement,modal,flagged
// triage.csv: item_id,skill_id,k,response,agreement,reason
std::string binary_summary_csv(const BinarySummary& s);
std::string tiers_csv(const BinarySummary& s);
std::string open_set_summary_csv(const OpenSetSummary& s);
std::string recall_csv(const OpenSetSummary& s);
std::string ensemble_summary_csv(const EnsembleSummary& s);
std::string agreement_csv(const EnsembleSummary& s);
std::string triage_csv(const RunResult& result);

/// Writes report.json and the CSV tables into run_dir (manifest.json too).
void emit_report(const std::filesystem::path& run_dir, const RunManifest& m, const RunResult& result);

/// Shortest round-trip decimal, or "undefined".
std::string format_metric(std::optional<double> v);

}  // namespace alignaudit
