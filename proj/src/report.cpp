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

#include "alignaudit/report.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "alignaudit/error.hpp"
#include "alignaudit/table_io.hpp"

#ifndef ALIGNAUDIT_VERSION
#define ALIGNAUDIT_VERSION "0.0.0"
#endif

namespace alignaudit {

using nlohmann::json;

namespace {

json opt(std::optional<double> v) { return v ? json(*v) : json(); }

std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

template <class E, class Parse>
E parse_or_throw(const json& j, Parse parse, const char* what) {
  auto v = parse(j.get<std::string>());
  if (!v) throw Error(ErrorCode::InvalidRecord, std::string("bad ") + what + ": " + j.get<std::string>());
  return *v;
}

Grade grade_of(const json& j) { return parse_or_throw<Grade>(j, parse_grade, "grade"); }
Subject subject_of(const json& j) { return parse_or_throw<Subject>(j, parse_subject, "subject"); }

std::optional<Verdict::Kind> parse_verdict_kind(std::string_view s) {
  for (auto k : {Verdict::Kind::Aligned, Verdict::Kind::Misaligned, Verdict::Kind::Unparseable}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

json error_json(const std::optional<ErrorCode>& code, const std::string& msg) {
  if (!code) return json();
  return {{"code", to_string(*code)}, {"message", msg}};
}

void error_from(const json& j, std::optional<ErrorCode>& code, std::string& msg) {
  if (j.is_null()) return;
  code = parse_error_code(j.at("code").get<std::string>());
  if (!code) throw Error(ErrorCode::InvalidRecord, "unknown error code in report");
  msg = j.value("message", "");
}

json confusion_json(const ConfusionMatrix& cm) { return {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}}; }

MetricSuite suite_or_undefined(const ConfusionMatrix& cm) {
  if (cm.total() == 0) return {};
  return metric_suite(cm);
}

json metrics_json(const MetricSuite& m) {
  return {{"accuracy", opt(m.accuracy)},       {"precision", opt(m.precision)}, {"recall", opt(m.recall)},
          {"specificity", opt(m.specificity)}, {"f1", opt(m.f1)},               {"fp_rate", opt(m.fp_rate)},
          {"fn_rate", opt(m.fn_rate)}};
}

std::optional<double> ratio(size_t a, size_t b) {
  if (b == 0) return std::nullopt;
  return static_cast<double>(a) / static_cast<double>(b);
}

json binary_cell_json(const BinaryCell& c) {
  json tiers = json::object();
  for (auto b : kAllBuckets) {
    auto it = c.tiers.find(b);
    const auto [correct, scored] = it == c.tiers.end() ? std::pair<size_t, size_t>{0, 0} : it->second;
    tiers[std::string(to_string(b))] = {{"scored", scored}, {"correct", correct}, {"accuracy", opt(ratio(correct, scored))}};
  }
  return {{"n", c.n},
          {"scored", c.cm.total()},
          {"unparseable", c.unparseable},
          {"errors", c.errors},
          {"confusion", confusion_json(c.cm)},
          {"metrics", metrics_json(suite_or_undefined(c.cm))},
          {"tiers", tiers}};
}

json binary_summary_json(const BinarySummary& s) {
  json strata = json::array();
  for (const auto& [st, cell] : s.strata) {
    json row = binary_cell_json(cell);
    row["grade"] = to_string(st.first);
    row["subject"] = to_string(st.second);
    strata.push_back(std::move(row));
  }
  return {{"overall", binary_cell_json(s.overall)}, {"strata", strata}};
}

json binary_record_json(const BinaryRecord& r) {
  return {{"item_id", r.item_id},
          {"skill_id", r.skill_id},
          {"grade", to_string(r.grade)},
          {"subject", to_string(r.subject)},
          {"truth", to_string(r.truth)},
          {"tier", r.tier ? json(to_string(*r.tier)) : json()},
          {"repeat", r.repeat},
          {"responses", r.raw_responses},
          {"verdict", to_string(r.verdict)},
          {"outcome", to_string(r.outcome)},
          {"error", error_json(r.error, r.error_message)}};
}

BinaryRecord binary_record_from(const json& j) {
  BinaryRecord r;
  r.item_id = j.at("item_id").get<std::string>();
  r.skill_id = j.at("skill_id").get<std::string>();
  r.grade = grade_of(j.at("grade"));
  r.subject = subject_of(j.at("subject"));
  r.truth = parse_or_throw<AlignmentLabel>(j.at("truth"), parse_label, "label");
  if (!j.at("tier").is_null()) r.tier = parse_or_throw<MisalignmentTier>(j.at("tier"), parse_tier, "tier");
  r.repeat = j.at("repeat").get<int>();
  r.raw_responses = j.at("responses").get<std::vector<std::string>>();
  r.verdict = parse_or_throw<Verdict::Kind>(j.at("verdict"), parse_verdict_kind, "verdict");
  r.outcome = parse_or_throw<Outcome>(j.at("outcome"), parse_outcome, "outcome");
  error_from(j.at("error"), r.error, r.error_message);
  return r;
}

json topk_cell_json(int k, const TopKCell& c) {
  return {{"k", k},
          {"n", c.n},
          {"hits", c.hits},
          {"unparseable", c.unparseable},
          {"errors", c.errors},
          {"retrieval_misses", c.retrieval_misses},
          {"accuracy", opt(c.accuracy())},
          {"accuracy_parsed_only", opt(c.accuracy_parsed_only())}};
}

json recall_cell_json(const RecallCell& c) {
  json rec = json::array();
  for (const auto& [cut, hits] : c.hits) {
    rec.push_back({{"cutoff", cut}, {"hits", hits}, {"recall", opt(ratio(hits, c.n))}});
  }
  return {{"n", c.n}, {"recall", rec}};
}

json open_set_summary_json(const OpenSetSummary& s) {
  json by_k = json::array();
  for (const auto& [k, c] : s.overall) by_k.push_back(topk_cell_json(k, c));
  json strata = json::array();
  for (const auto& [st, cells] : s.strata) {
    json ks = json::array();
    for (const auto& [k, c] : cells) ks.push_back(topk_cell_json(k, c));
    strata.push_back({{"grade", to_string(st.first)}, {"subject", to_string(st.second)}, {"by_k", ks}});
  }
  json out = {{"by_k", by_k}, {"strata", strata}, {"monotonicity_violations", s.monotonicity_violations}};
  if (s.filtered) {
    json rs = json::array();
    for (const auto& [st, c] : s.recall_strata) {
      json row = recall_cell_json(c);
      row["grade"] = to_string(st.first);
      row["subject"] = to_string(st.second);
      rs.push_back(std::move(row));
    }
    out["retrieval"] = {{"cutoffs", s.recall_cutoffs}, {"overall", recall_cell_json(s.recall_overall)}, {"strata", rs}};
  }
  return out;
}

json open_set_record_json(const OpenSetRecord& r) {
  return {{"item_id", r.item_id},
          {"grade", to_string(r.grade)},
          {"subject", to_string(r.subject)},
          {"true_skill_id", r.true_skill_id},
          {"k", r.k},
          {"candidates", r.candidate_ids},
          {"response", r.raw_response},
          {"selection", r.selection},
          {"outcome", to_string(r.outcome)},
          {"error", error_json(r.error, r.error_message)},
          {"retrieval_rank", r.retrieval_rank ? json(*r.retrieval_rank) : json()},
          {"pool_size", r.pool_size}};
}

OpenSetRecord open_set_record_from(const json& j) {
  OpenSetRecord r;
  r.item_id = j.at("item_id").get<std::string>();
  r.grade = grade_of(j.at("grade"));
  r.subject = subject_of(j.at("subject"));
  r.true_skill_id = j.at("true_skill_id").get<std::string>();
  r.k = j.at("k").get<int>();
  r.candidate_ids = j.at("candidates").get<std::vector<std::string>>();
  r.raw_response = j.at("response").get<std::string>();
  r.selection = j.at("selection").get<std::vector<std::string>>();
  r.outcome = parse_or_throw<Outcome>(j.at("outcome"), parse_outcome, "outcome");
  error_from(j.at("error"), r.error, r.error_message);
  if (!j.at("retrieval_rank").is_null()) r.retrieval_rank = j.at("retrieval_rank").get<size_t>();
  r.pool_size = j.at("pool_size").get<size_t>();
  return r;
}

json ensemble_summary_json(const EnsembleSummary& s) {
  json reps = json::array();
  for (size_t r = 0; r < s.per_repeat.size(); ++r) {
    reps.push_back({{"repeat", r}, {"confusion", confusion_json(s.per_repeat[r])}, {"f1", opt(s.f1_per_repeat[r])}});
  }
  json items = json::array();
  size_t flagged = 0;
  for (const auto& e : s.items) {
    flagged += e.flagged;
    items.push_back({{"item_id", e.item_id},
                     {"skill_id", e.skill_id},
                     {"aligned", e.aligned},
                     {"misaligned", e.misaligned},
                     {"no_verdict", e.no_verdict},
                     {"agreement", e.agreement},
                     {"modal", e.modal},
                     {"flagged", e.flagged},
                     {"flag_reason", e.flag_reason}});
  }
  return {{"per_repeat", reps},      {"f1_mean", opt(s.f1_mean)}, {"f1_stddev", opt(s.f1_stddev)},
          {"flagged", flagged},      {"items", items},            {"pooled", binary_summary_json(s.pooled)}};
}

void put_metric_columns(std::vector<std::string>& row, const MetricSuite& m) {
  for (auto v : {m.accuracy, m.precision, m.recall, m.specificity, m.f1, m.fp_rate, m.fn_rate}) {
    row.push_back(format_metric(v));
  }
}

std::string csv_of(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  CsvWriter w(out);
  for (const auto& r : rows) w.row(r);
  return out.str();
}

}  // namespace

std::string tool_version() { return ALIGNAUDIT_VERSION; }

std::string format_metric(std::optional<double> v) {
  if (!v) return "undefined";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *v);
  return std::string(buf, end);
}

// --- manifest ------------------------------------------------------------------

json to_json(const RunConfig& c) {
  return {{"kind", to_string(c.kind)},
          {"prompt", to_string(c.prompt)},
          {"topk_mode", to_string(c.topk_mode)},
          {"model_id", c.model_id},
          {"temperature", c.temperature ? json(*c.temperature) : json()},
          {"effective_temperature", c.effective_temperature()},
          {"max_output_tokens", c.max_output_tokens},
          {"ks", c.ks},
          {"filter_n", c.filter_n},
          {"repeats", c.repeats},
          {"temperature_schedule", c.temperature_schedule},
          {"agreement_threshold", c.agreement_threshold},
          {"seed", c.seed},
          {"concurrency", c.concurrency},
          {"skill_text", to_string(c.skill_text)}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  try {
    c.kind = parse_or_throw<TaskKind>(j.at("kind"), parse_task_kind, "task kind");
    c.prompt = parse_or_throw<BinaryPromptKind>(j.at("prompt"), parse_binary_prompt_kind, "prompt kind");
    c.topk_mode = parse_or_throw<TopKMode>(j.at("topk_mode"), parse_topk_mode, "top-k mode");
    c.model_id = j.at("model_id").get<std::string>();
    c.temperature = opt_from(j.at("temperature"));
    c.max_output_tokens = j.at("max_output_tokens").get<int>();
    c.ks = j.at("ks").get<std::vector<int>>();
    c.filter_n = j.at("filter_n").get<size_t>();
    c.repeats = j.at("repeats").get<int>();
    c.temperature_schedule = j.value("temperature_schedule", std::vector<double>{});
    c.agreement_threshold = j.at("agreement_threshold").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.concurrency = j.value("concurrency", size_t{4});
    c.skill_text = j.value("skill_text", "name+statement") == "statement" ? SkillTextMode::StatementOnly
                                                                          : SkillTextMode::NameAndStatement;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("run config: ") + e.what());
  }
  return c;
}

json to_json(const RunManifest& m) {
  json inputs = json::array();
  for (const auto& in : m.inputs) inputs.push_back({{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  return {{"tool_version", m.tool_version}, {"config", to_json(m.config)},  {"inputs", inputs},
          {"templates", m.template_ids},    {"transcript", m.transcript}, {"backend", m.backend},
          {"embedder", m.embedder}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.tool_version = j.at("tool_version").get<std::string>();
    m.config = run_config_from_json(j.at("config"));
    for (const auto& in : j.at("inputs")) {
      m.inputs.push_back({in.at("role").get<std::string>(), in.at("path").get<std::string>(),
                          in.at("sha256").get<std::string>()});
    }
    m.template_ids = j.at("templates").get<std::vector<std::string>>();
    m.transcript = j.value("transcript", "transcript.jsonl");
    m.backend = j.value("backend", "");
    m.embedder = j.contains("embedder") ? j.at("embedder") : json();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("manifest: ") + e.what());
  }
  return m;
}

std::filesystem::path resolve_input(const std::filesystem::path& run_dir, const InputRef& ref) {
  std::filesystem::path p(ref.path);
  return p.is_absolute() ? p : run_dir / p;
}

void verify_inputs(const std::filesystem::path& run_dir, const RunManifest& m) {
  for (const auto& in : m.inputs) {
    const auto p = resolve_input(run_dir, in);
    const auto got = file_sha256(p);
    if (got != in.sha256) {
      throw Error(ErrorCode::DigestMismatch, in.role + " input " + p.string() + " has digest " + got +
                                                 ", manifest records " + in.sha256);
    }
  }
}

// --- report --------------------------------------------------------------------

json report_json(const RunManifest& m, const RunResult& result) {
  json j;
  j["manifest"] = to_json(m);
  j["task"] = to_string(m.config.kind);
  std::visit(
      [&](const auto& run) {
        using T = std::decay_t<decltype(run)>;
        json records = json::array();
        if constexpr (std::is_same_v<T, BinaryRun>) {
          j["summary"] = binary_summary_json(run.summary);
          for (const auto& r : run.records) records.push_back(binary_record_json(r));
        } else if constexpr (std::is_same_v<T, OpenSetRun>) {
          j["summary"] = open_set_summary_json(run.summary);
          for (const auto& r : run.records) records.push_back(open_set_record_json(r));
        } else {
          j["summary"] = ensemble_summary_json(run.summary);
          for (const auto& r : run.records) records.push_back(binary_record_json(r));
        }
        j["records"] = std::move(records);
      },
      result);
  return j;
}

std::pair<RunManifest, RunResult> read_report(const std::filesystem::path& report_path) {
  json j;
  try {
    j = json::parse(read_file(report_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidRecord, report_path.string() + ": " + e.what());
  }
  RunManifest m = manifest_from_json(j.at("manifest"));
  const auto& c = m.config;
  try {
    switch (c.kind) {
      case TaskKind::BinaryAudit: {
        BinaryRun run;
        for (const auto& r : j.at("records")) run.records.push_back(binary_record_from(r));
        run.summary = summarize_binary(run.records);
        return {m, run};
      }
      case TaskKind::Ensemble: {
        EnsembleRun run;
        for (const auto& r : j.at("records")) run.records.push_back(binary_record_from(r));
        run.summary = summarize_ensemble(run.records, c.repeats, c.agreement_threshold);
        return {m, run};
      }
      case TaskKind::OpenSet:
      case TaskKind::FilteredOpenSet: {
        OpenSetRun run;
        for (const auto& r : j.at("records")) run.records.push_back(open_set_record_from(r));
        std::optional<size_t> filter;
        if (c.kind == TaskKind::FilteredOpenSet) filter = c.filter_n;
        run.summary = summarize_open_set(run.records, c.ks, filter);
        return {m, run};
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidRecord, report_path.string() + ": " + e.what());
  }
  throw Error(ErrorCode::InvalidRecord, "unknown task kind");
}

// --- CSV -----------------------------------------------------------------------

std::string binary_summary_csv(const BinarySummary& s) {
  std::vector<std::vector<std::string>> rows = {{"scope", "grade", "subject", "n", "scored", "unparseable", "errors",
                                                 "tp", "tn", "fp", "fn", "accuracy", "precision", "recall",
                                                 "specificity", "f1", "fp_rate", "fn_rate"}};
  auto add = [&](const std::string& scope, const std::string& g, const std::string& sub, const BinaryCell& c) {
    std::vector<std::string> row = {scope,
                                    g,
                                    sub,
                                    std::to_string(c.n),
                                    std::to_string(c.cm.total()),
                                    std::to_string(c.unparseable),
                                    std::to_string(c.errors),
                                    std::to_string(c.cm.tp),
                                    std::to_string(c.cm.tn),
                                    std::to_string(c.cm.fp),
                                    std::to_string(c.cm.fn)};
    put_metric_columns(row, suite_or_undefined(c.cm));
    rows.push_back(std::move(row));
  };
  add("all", "", "", s.overall);
  for (const auto& [st, c] : s.strata) add("stratum", std::string(to_string(st.first)), std::string(to_string(st.second)), c);
  return csv_of(rows);
}

std::string tiers_csv(const BinarySummary& s) {
  std::vector<std::vector<std::string>> rows = {{"scope", "grade", "subject", "tier", "scored", "correct", "accuracy"}};
  auto add = [&](const std::string& scope, const std::string& g, const std::string& sub, const BinaryCell& c) {
    for (auto b : kAllBuckets) {
      auto it = c.tiers.find(b);
      const auto [correct, scored] = it == c.tiers.end() ? std::pair<size_t, size_t>{0, 0} : it->second;
      rows.push_back({scope, g, sub, std::string(to_string(b)), std::to_string(scored), std::to_string(correct),
                      format_metric(ratio(correct, scored))});
    }
  };
  add("all", "", "", s.overall);
  for (const auto& [st, c] : s.strata) add("stratum", std::string(to_string(st.first)), std::string(to_string(st.second)), c);
  return csv_of(rows);
}

std::string open_set_summary_csv(const OpenSetSummary& s) {
  std::vector<std::vector<std::string>> rows = {{"scope", "grade", "subject", "k", "n", "hits", "unparseable", "errors",
                                                 "retrieval_misses", "accuracy", "accuracy_parsed_only",
                                                 "retrieval_recall"}};
  auto recall_of = [&](const RecallCell* rc) -> std::string {
    if (!s.filtered || !rc) return "";
    auto it = rc->hits.find(s.filter_n);
    return format_metric(ratio(it == rc->hits.end() ? 0 : it->second, rc->n));
  };
  auto add = [&](const std::string& scope, const std::string& g, const std::string& sub,
                 const std::map<int, TopKCell>& cells, const RecallCell* rc) {
    for (const auto& [k, c] : cells) {
      rows.push_back({scope, g, sub, std::to_string(k), std::to_string(c.n), std::to_string(c.hits),
                      std::to_string(c.unparseable), std::to_string(c.errors), std::to_string(c.retrieval_misses),
                      format_metric(c.accuracy()), format_metric(c.accuracy_parsed_only()), recall_of(rc)});
    }
  };
  add("all", "", "", s.overall, &s.recall_overall);
  for (const auto& [st, cells] : s.strata) {
    auto it = s.recall_strata.find(st);
    add("stratum", std::string(to_string(st.first)), std::string(to_string(st.second)), cells,
        it == s.recall_strata.end() ? nullptr : &it->second);
  }
  return csv_of(rows);
}

std::string recall_csv(const OpenSetSummary& s) {
  std::vector<std::vector<std::string>> rows = {{"scope", "grade", "subject", "cutoff", "n", "hits", "recall"}};
  auto add = [&](const std::string& scope, const std::string& g, const std::string& sub, const RecallCell& c) {
    for (const auto& [cut, hits] : c.hits) {
      rows.push_back({scope, g, sub, std::to_string(cut), std::to_string(c.n), std::to_string(hits),
                      format_metric(ratio(hits, c.n))});
    }
  };
  add("all", "", "", s.recall_overall);
  for (const auto& [st, c] : s.recall_strata) {
    add("stratum", std::string(to_string(st.first)), std::string(to_string(st.second)), c);
  }
  return csv_of(rows);
}

std::string ensemble_summary_csv(const EnsembleSummary& s) {
  std::vector<std::vector<std::string>> rows = {
      {"repeat", "scored", "tp", "tn", "fp", "fn", "accuracy", "precision", "recall", "specificity", "f1"}};
  for (size_t r = 0; r < s.per_repeat.size(); ++r) {
    const auto& cm = s.per_repeat[r];
    const auto m = suite_or_undefined(cm);
    rows.push_back({std::to_string(r), std::to_string(cm.total()), std::to_string(cm.tp), std::to_string(cm.tn),
                    std::to_string(cm.fp), std::to_string(cm.fn), format_metric(m.accuracy),
                    format_metric(m.precision), format_metric(m.recall), format_metric(m.specificity),
                    format_metric(s.f1_per_repeat[r])});
  }
  rows.push_back({"mean", "", "", "", "", "", "", "", "", "", format_metric(s.f1_mean)});
  rows.push_back({"stddev", "", "", "", "", "", "", "", "", "", format_metric(s.f1_stddev)});
  return csv_of(rows);
}

std::string agreement_csv(const EnsembleSummary& s) {
  std::vector<std::vector<std::string>> rows = {{"item_id", "skill_id", "truth", "tier", "aligned", "misaligned",
                                                 "no_verdict", "agreement", "modal", "flagged"}};
  for (const auto& e : s.items) {
    rows.push_back({e.item_id, e.skill_id, std::string(to_string(e.truth)),
                    e.tier ? std::string(to_string(*e.tier)) : "", std::to_string(e.aligned),
                    std::to_string(e.misaligned), std::to_string(e.no_verdict), format_metric(e.agreement), e.modal,
                    e.flagged ? "true" : "false"});
  }
  return csv_of(rows);
}

std::string triage_csv(const RunResult& result) {
  std::vector<std::vector<std::string>> rows = {{"item_id", "skill_id", "k", "response", "agreement", "reason"}};
  auto reason_of = [](Outcome o, const std::optional<ErrorCode>& e, const std::string& msg) {
    std::string r(to_string(o));
    if (e) r += " (" + std::string(to_string(*e)) + (msg.empty() ? "" : ": " + msg) + ")";
    return r;
  };
  std::visit(
      [&](const auto& run) {
        using T = std::decay_t<decltype(run)>;
        if constexpr (std::is_same_v<T, EnsembleRun>) {
          for (const auto& e : run.summary.items) {
            if (!e.flagged) continue;
            std::string resp = "aligned=" + std::to_string(e.aligned) + " misaligned=" + std::to_string(e.misaligned) +
                               " none=" + std::to_string(e.no_verdict);
            rows.push_back({e.item_id, e.skill_id, "", resp, format_metric(e.agreement), e.flag_reason});
          }
        } else if constexpr (std::is_same_v<T, BinaryRun>) {
          for (const auto& r : run.records) {
            if (r.outcome != Outcome::Unparseable && r.outcome != Outcome::Error) continue;
            rows.push_back({r.item_id, r.skill_id, "", r.raw_responses.empty() ? "" : r.raw_responses.back(), "",
                            reason_of(r.outcome, r.error, r.error_message)});
          }
        } else {
          for (const auto& r : run.records) {
            if (r.outcome != Outcome::Unparseable && r.outcome != Outcome::Error &&
                r.outcome != Outcome::RetrievalMiss) {
              continue;
            }
            std::string sel;
            for (const auto& id : r.selection) sel += (sel.empty() ? "" : " ") + id;
            rows.push_back({r.item_id, r.true_skill_id, std::to_string(r.k), sel.empty() ? r.raw_response : sel, "",
                            reason_of(r.outcome, r.error, r.error_message)});
          }
        }
      },
      result);
  return csv_of(rows);
}

void emit_report(const std::filesystem::path& run_dir, const RunManifest& m, const RunResult& result) {
  std::filesystem::create_directories(run_dir);
  write_file(run_dir / "manifest.json", to_json(m).dump(2) + "\n");
  write_file(run_dir / "report.json", report_json(m, result).dump(2) + "\n");
  std::visit(
      [&](const auto& run) {
        using T = std::decay_t<decltype(run)>;
        if constexpr (std::is_same_v<T, BinaryRun>) {
          write_file(run_dir / "summary.csv", binary_summary_csv(run.summary));
          write_file(run_dir / "tiers.csv", tiers_csv(run.summary));
        } else if constexpr (std::is_same_v<T, OpenSetRun>) {
          write_file(run_dir / "summary.csv", open_set_summary_csv(run.summary));
          if (run.summary.filtered) write_file(run_dir / "recall.csv", recall_csv(run.summary));
        } else {
          write_file(run_dir / "summary.csv", ensemble_summary_csv(run.summary));
          write_file(run_dir / "tiers.csv", tiers_csv(run.summary.pooled));
          write_file(run_dir / "agreement.csv", agreement_csv(run.summary));
        }
      },
      result);
  write_file(run_dir / "triage.csv", triage_csv(result));
}

}  // namespace alignaudit
