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

// Binary and retrieval metrics. Misaligned is the positive class throughout.
// A ratio whose denominator is zero is undefined (std::nullopt), never 0.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alignaudit/corpus.hpp"
#include "alignaudit/retrieval.hpp"

namespace alignaudit {

struct ConfusionMatrix {
  std::int64_t tp = 0;  // misaligned, predicted misaligned
  std::int64_t tn = 0;  // aligned, predicted aligned
  std::int64_t fp = 0;  // aligned, predicted misaligned
  std::int64_t fn = 0;  // misaligned, predicted aligned

  std::int64_t total() const { return tp + tn + fp + fn; }
  void add(AlignmentLabel truth, AlignmentLabel predicted);
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;
};

struct LabeledVerdict {
  AlignmentLabel truth = AlignmentLabel::Aligned;
  AlignmentLabel predicted = AlignmentLabel::Aligned;
  std::optional<MisalignmentTier> tier;  // set for misaligned truths
};

ConfusionMatrix confusion(std::span<const LabeledVerdict> records);

struct MetricSuite {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> specificity;
  std::optional<double> f1;
  std::optional<double> fp_rate;  // fp / total
  std::optional<double> fn_rate;  // fn / total
};

/// Throws EmptyMatrix when total is 0.
MetricSuite metric_suite(const ConfusionMatrix& cm);

/// 2PR / (P + R); undefined when either input is, or when P + R == 0.
std::optional<double> f1_from(std::optional<double> precision, std::optional<double> recall);

enum class TierBucket { Aligned, Completely, Somewhat, Slightly };
inline constexpr TierBucket kAllBuckets[] = {TierBucket::Aligned, TierBucket::Completely, TierBucket::Somewhat,
                                            TierBucket::Slightly};
std::string_view to_string(TierBucket b);
TierBucket bucket_of(AlignmentLabel truth, std::optional<MisalignmentTier> tier);

/// Share of correct predictions per bucket; an empty bucket is undefined.
std::map<TierBucket, std::optional<double>> accuracy_by_tier(std::span<const LabeledVerdict> records);

/// Fraction of selections containing their truth. Sizes must match.
std::optional<double> topk_accuracy(std::span<const std::vector<std::string>> selections,
                                    std::span<const std::string> truths);

/// Fraction of items whose truth ranks within the first n.
std::optional<double> recall_at_n(std::span<const RankedCandidates> rankings, std::span<const std::string> truths,
                                  size_t n);
/// Same, from 1-based ranks (0 = absent from the ranking).
std::optional<double> recall_at_n(std::span<const size_t> ranks, size_t n);

std::optional<double> mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); undefined below two values.
std::optional<double> sample_stddev(std::span<const double> xs);

}  // namespace alignaudit
