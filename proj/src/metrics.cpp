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

#include "alignaudit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "alignaudit/error.hpp"

namespace alignaudit {
namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void ConfusionMatrix::add(AlignmentLabel truth, AlignmentLabel predicted) {
  const bool pos = truth == AlignmentLabel::Misaligned;
  const bool said_pos = predicted == AlignmentLabel::Misaligned;
  if (pos && said_pos) ++tp;
  else if (!pos && !said_pos) ++tn;
  else if (!pos) ++fp;
  else ++fn;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

ConfusionMatrix confusion(std::span<const LabeledVerdict> records) {
  ConfusionMatrix cm;
  for (const auto& r : records) cm.add(r.truth, r.predicted);
  return cm;
}

std::optional<double> f1_from(std::optional<double> precision, std::optional<double> recall) {
  if (!precision || !recall) return std::nullopt;
  const double s = *precision + *recall;
  if (s == 0.0) return std::nullopt;
  return 2.0 * *precision * *recall / s;
}

MetricSuite metric_suite(const ConfusionMatrix& cm) {
  if (cm.tp < 0 || cm.tn < 0 || cm.fp < 0 || cm.fn < 0) throw Error(ErrorCode::InvalidRecord, "negative count");
  const auto total = cm.total();
  if (total == 0) throw Error(ErrorCode::EmptyMatrix, "confusion matrix is empty");
  MetricSuite m;
  m.accuracy = ratio(cm.tp + cm.tn, total);
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  m.specificity = ratio(cm.tn, cm.tn + cm.fp);
  m.f1 = f1_from(m.precision, m.recall);
  m.fp_rate = ratio(cm.fp, total);
  m.fn_rate = ratio(cm.fn, total);
  return m;
}

std::string_view to_string(TierBucket b) {
  switch (b) {
    case TierBucket::Aligned: return "aligned";
    case TierBucket::Completely: return "completely";
    case TierBucket::Somewhat: return "somewhat";
    case TierBucket::Slightly: return "slightly";
  }
  return "?";
}

TierBucket bucket_of(AlignmentLabel truth, std::optional<MisalignmentTier> tier) {
  if (truth == AlignmentLabel::Aligned) return TierBucket::Aligned;
  if (!tier) throw Error(ErrorCode::InvalidRecord, "misaligned record without a tier");
  switch (*tier) {
    case MisalignmentTier::Completely: return TierBucket::Completely;
    case MisalignmentTier::Somewhat: return TierBucket::Somewhat;
    case MisalignmentTier::Slightly: return TierBucket::Slightly;
  }
  return TierBucket::Aligned;
}

std::map<TierBucket, std::optional<double>> accuracy_by_tier(std::span<const LabeledVerdict> records) {
  std::map<TierBucket, std::pair<std::int64_t, std::int64_t>> tally;  // correct, seen
  for (const auto& r : records) {
    auto& [correct, seen] = tally[bucket_of(r.truth, r.tier)];
    ++seen;
    if (r.predicted == r.truth) ++correct;
  }
  std::map<TierBucket, std::optional<double>> out;
  for (auto b : kAllBuckets) {
    auto [correct, seen] = tally[b];
    out[b] = ratio(correct, seen);
  }
  return out;
}

std::optional<double> topk_accuracy(std::span<const std::vector<std::string>> selections,
                                    std::span<const std::string> truths) {
  if (selections.size() != truths.size()) throw Error(ErrorCode::InvalidRecord, "selections and truths differ in size");
  std::int64_t hits = 0;
  for (size_t i = 0; i < truths.size(); ++i) {
    if (std::find(selections[i].begin(), selections[i].end(), truths[i]) != selections[i].end()) ++hits;
  }
  return ratio(hits, static_cast<std::int64_t>(truths.size()));
}

std::optional<double> recall_at_n(std::span<const size_t> ranks, size_t n) {
  std::int64_t hits = 0;
  for (size_t r : ranks) {
    if (r != 0 && r <= n) ++hits;
  }
  return ratio(hits, static_cast<std::int64_t>(ranks.size()));
}

std::optional<double> recall_at_n(std::span<const RankedCandidates> rankings, std::span<const std::string> truths,
                                  size_t n) {
  if (rankings.size() != truths.size()) throw Error(ErrorCode::InvalidRecord, "rankings and truths differ in size");
  std::vector<size_t> ranks;
  ranks.reserve(truths.size());
  for (size_t i = 0; i < truths.size(); ++i) ranks.push_back(rankings[i].rank_of(truths[i]));
  return recall_at_n(ranks, n);
}

std::optional<double> mean(std::span<const double> xs) {
  if (xs.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

std::optional<double> sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return std::nullopt;
  const double m = *mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace alignaudit
