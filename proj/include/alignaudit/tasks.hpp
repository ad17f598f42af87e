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

// Task runners: binary alignment audit, open-set top-k classification, the
// two-stage filtered variant and repeated-sampling ensembles.
//
// Runners never abort on a backend failure; the failing record carries the
// error and the batch goes on. Records are stored by input position, so the
// completion order of concurrent calls cannot change any result.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alignaudit/corpus.hpp"
#include "alignaudit/gateway.hpp"
#include "alignaudit/metrics.hpp"
#include "alignaudit/prompts.hpp"
#include "alignaudit/retrieval.hpp"
#include "alignaudit/taxonomy.hpp"

namespace alignaudit {

enum class TaskKind { BinaryAudit, OpenSet, FilteredOpenSet, Ensemble };
std::string_view to_string(TaskKind k);
std::optional<TaskKind> parse_task_kind(std::string_view s);

struct RunConfig {
  TaskKind kind = TaskKind::BinaryAudit;
  BinaryPromptKind prompt = BinaryPromptKind::ZeroShot;
  TopKMode topk_mode = TopKMode::SeparatePrompt;
  std::string model_id = "gpt-4o-mini";
  std::optional<double> temperature;  // unset: 1 for binary and ensemble, 0 for top-k
  int max_output_tokens = 64;
  std::vector<int> ks = {1, 3, 5};
  size_t filter_n = kDefaultFilterN;
  int repeats = 5;
  std::vector<double> temperature_schedule;  // ensemble: one per repeat, overrides temperature
  double agreement_threshold = 0.8;
  std::uint64_t seed = 0;
  size_t concurrency = 4;
  SkillTextMode skill_text = SkillTextMode::NameAndStatement;

  double effective_temperature() const;
  double temperature_for_repeat(int repeat) const;  // 0-based
};

/// Throws InvalidConfig.
void validate(const RunConfig& config);

enum class Outcome { Correct, Incorrect, Unparseable, RetrievalMiss, Error };
std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view s);

using Stratum = std::pair<Grade, Subject>;

struct BinaryRecord {
  std::string item_id;
  std::string skill_id;
  Grade grade = Grade::K;
  Subject subject = Subject::Math;
  AlignmentLabel truth = AlignmentLabel::Aligned;
  std::optional<MisalignmentTier> tier;
  int repeat = 0;
  std::vector<std::string> raw_responses;  // second entry present after a re-ask
  Verdict::Kind verdict = Verdict::Kind::Unparseable;
  Outcome outcome = Outcome::Unparseable;
  std::optional<ErrorCode> error;
  std::string error_message;
};

struct OpenSetRecord {
  std::string item_id;
  Grade grade = Grade::K;
  Subject subject = Subject::Math;
  std::string true_skill_id;
  int k = 1;
  std::vector<std::string> candidate_ids;  // offered pool, skill_id order
  std::string raw_response;
  std::vector<std::string> selection;
  Outcome outcome = Outcome::Unparseable;
  std::optional<ErrorCode> error;
  std::string error_message;
  // filtered runs only
  std::optional<size_t> retrieval_rank;  // 1-based rank of the truth in the full pool
  size_t pool_size = 0;
};

struct TaskContext {
  const SkillCatalog& catalog;
  const ItemBank& bank;
  Gateway& gateway;
  std::span<const Exemplar> exemplars = {};
  EmbeddingProvider* embedder = nullptr;  // filtered runs
};

/// Runs fn(0..n-1) on up to `workers` threads; rethrows the first exception
/// after every worker has stopped.
void parallel_for(size_t n, size_t workers, const std::function<void(size_t)>& fn);

struct PlannedPrompt {
  std::string request_tag;
  std::string template_id;
  ModelRequest request;
};

// --- binary audit ----------------------------------------------------------

struct BinaryCell {
  ConfusionMatrix cm;
  size_t n = 0;
  size_t unparseable = 0;
  size_t errors = 0;
  std::map<TierBucket, std::pair<size_t, size_t>> tiers;  // correct, scored

  void add(const BinaryRecord& r);
};

struct BinarySummary {
  BinaryCell overall;
  std::map<Stratum, BinaryCell> strata;
};

struct BinaryRun {
  std::vector<BinaryRecord> records;
  BinarySummary summary;
};

BinarySummary summarize_binary(std::span<const BinaryRecord> records);

/// Scores verdicts against the pair labels. An unparseable reply gets one
/// re-ask with the same prompt; if that fails too the record lands in the
/// unparseable bucket, outside the confusion matrix.
BinaryRun run_binary_audit(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config);
std::vector<PlannedPrompt> plan_binary_audit(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config);

// --- open-set top-k ----------------------------------------------------------

struct TopKCell {
  size_t n = 0;
  size_t hits = 0;
  size_t unparseable = 0;
  size_t errors = 0;
  size_t retrieval_misses = 0;

  /// hits / n: unparseable and failed items count as wrong.
  std::optional<double> accuracy() const;
  /// hits / (n - unparseable - errors).
  std::optional<double> accuracy_parsed_only() const;
  void add(const OpenSetRecord& r);
};

struct RecallCell {
  size_t n = 0;
  std::map<size_t, size_t> hits;  // cutoff -> items with truth inside it
};

struct OpenSetSummary {
  std::map<int, TopKCell> overall;
  std::map<Stratum, std::map<int, TopKCell>> strata;
  bool filtered = false;
  size_t filter_n = 0;
  std::vector<size_t> recall_cutoffs;
  RecallCell recall_overall;
  std::map<Stratum, RecallCell> recall_strata;
  /// One note per stratum where accuracy falls as k grows.
  std::vector<std::string> monotonicity_violations;
};

struct OpenSetRun {
  std::vector<OpenSetRecord> records;  // item-major, then k ascending
  OpenSetSummary summary;
};

/// Cutoffs reported for retrieval recall: 1, 3, 5, 10, 15, 20 and filter_n.
std::vector<size_t> recall_cutoffs(size_t filter_n);

OpenSetSummary summarize_open_set(std::span<const OpenSetRecord> records, std::span<const int> ks,
                                  std::optional<size_t> filter_n);

/// Every link's item is classified against its full (grade, subject) pool.
/// Throws KExceedsCandidates before any call when a pool is smaller than k.
OpenSetRun run_open_set(std::span<const AlignedLink> links, const TaskContext& ctx, const RunConfig& config);
std::vector<PlannedPrompt> plan_open_set(std::span<const AlignedLink> links, const TaskContext& ctx,
                                         const RunConfig& config);

/// Stage one ranks the pool by embedding similarity and keeps the top
/// filter_n; stage two classifies against that subset (listed in skill_id
/// order). A truth filtered out makes the record RetrievalMiss.
OpenSetRun run_filtered_open_set(std::span<const AlignedLink> links, const TaskContext& ctx,
                                 const RunConfig& config);
std::vector<PlannedPrompt> plan_filtered_open_set(std::span<const AlignedLink> links, const TaskContext& ctx,
                                                  const RunConfig& config);

// --- ensemble --------------------------------------------------------------

struct EnsembleItem {
  std::string item_id;
  std::string skill_id;
  Grade grade = Grade::K;
  Subject subject = Subject::Math;
  AlignmentLabel truth = AlignmentLabel::Aligned;
  std::optional<MisalignmentTier> tier;
  int aligned = 0;
  int misaligned = 0;
  int no_verdict = 0;  // unparseable or failed
  double agreement = 0.0;  // largest count / repeats
  bool flagged = false;
  std::string flag_reason;
  std::string modal;  // "aligned", "misaligned", "none" or "tie"
};

struct EnsembleSummary {
  std::vector<EnsembleItem> items;  // pair order
  std::vector<ConfusionMatrix> per_repeat;
  std::vector<std::optional<double>> f1_per_repeat;
  std::optional<double> f1_mean;
  std::optional<double> f1_stddev;
  BinarySummary pooled;  // every repeat together
};

struct EnsembleRun {
  std::vector<BinaryRecord> records;  // repeat-major
  EnsembleSummary summary;
};

EnsembleSummary summarize_ensemble(std::span<const BinaryRecord> records, int repeats, double threshold);

/// The binary audit repeated `repeats` times; each repeat is a distinct
/// sample (its own cache key). Items whose agreement falls below the
/// threshold, or whose modal outcome is no verdict, are flagged.
EnsembleRun run_ensemble(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config);
std::vector<PlannedPrompt> plan_ensemble(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config);

}  // namespace alignaudit
