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

#include "alignaudit/tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "alignaudit/error.hpp"

namespace alignaudit {
namespace {

std::string join_tag(const std::string& a, std::string_view b) {
  if (a.empty()) return std::string(b);
  return a + ";" + std::string(b);
}

// --- binary ------------------------------------------------------------------

struct BinaryUnit {
  const ItemSkillPair* pair;
  int repeat;
  PlannedPrompt plan;
};

std::vector<BinaryUnit> binary_units(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config,
                                     int repeats, bool tag_repeats) {
  const std::string template_id = binary_template(config.prompt).id();
  std::vector<BinaryUnit> units;
  units.reserve(pairs.pairs.size() * static_cast<size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    for (const auto& p : pairs.pairs) {
      const Item& item = ctx.bank.at(p.item_id);
      const Skill& skill = ctx.catalog.at(p.skill_id);
      ModelRequest req;
      req.model_id = config.model_id;
      req.prompt = render_binary_prompt(config.prompt, item, skill, ctx.exemplars);
      req.temperature = tag_repeats ? config.temperature_for_repeat(r) : config.effective_temperature();
      req.max_output_tokens = config.max_output_tokens;
      req.request_tag = p.item_id + "|" + p.skill_id;
      if (tag_repeats) {
        req.request_tag += "|r" + std::to_string(r);
        req.sample_tag = "repeat=" + std::to_string(r);
      }
      units.push_back({&p, r, {req.request_tag, template_id, std::move(req)}});
    }
  }
  return units;
}

BinaryRecord evaluate_binary(const BinaryUnit& unit, const TaskContext& ctx) {
  const auto& p = *unit.pair;
  const Item& item = ctx.bank.at(p.item_id);
  BinaryRecord rec;
  rec.item_id = p.item_id;
  rec.skill_id = p.skill_id;
  rec.grade = item.grade;
  rec.subject = item.subject;
  rec.truth = p.label;
  rec.tier = p.tier;
  rec.repeat = unit.repeat;
  try {
    auto resp = ctx.gateway.complete(unit.plan.request);
    rec.raw_responses.push_back(resp.raw_text);
    Verdict v = parse_binary_verdict(resp.raw_text);
    if (!v.parsed()) {
      ModelRequest again = unit.plan.request;
      again.sample_tag = join_tag(again.sample_tag, "reask");
      again.request_tag += "|reask";
      auto resp2 = ctx.gateway.complete(again);
      rec.raw_responses.push_back(resp2.raw_text);
      v = parse_binary_verdict(resp2.raw_text);
    }
    rec.verdict = v.kind;
    if (!v.parsed()) {
      rec.outcome = Outcome::Unparseable;
    } else {
      rec.outcome = v.label() == p.label ? Outcome::Correct : Outcome::Incorrect;
    }
  } catch (const Error& e) {
    if (!is_backend_error(e.code())) throw;
    rec.outcome = Outcome::Error;
    rec.error = e.code();
    rec.error_message = e.detail();
  }
  return rec;
}

std::vector<BinaryRecord> execute_binary(const std::vector<BinaryUnit>& units, const TaskContext& ctx,
                                         size_t concurrency) {
  std::vector<BinaryRecord> records(units.size());
  parallel_for(units.size(), concurrency, [&](size_t i) { records[i] = evaluate_binary(units[i], ctx); });
  return records;
}

// --- top-k -------------------------------------------------------------------

struct TopKItem {
  const Item* item = nullptr;
  std::string truth;
  std::vector<const Skill*> pool;  // offered candidates, skill_id order
  std::optional<size_t> retrieval_rank;
  size_t pool_size = 0;
  std::optional<Error> stage_one_error;
};

struct TopKCall {
  size_t item_index;
  int k;  // k rendered into the prompt
  PlannedPrompt plan;
};

std::vector<Skill> copy_pool(const std::vector<const Skill*>& pool) {
  std::vector<Skill> out;
  out.reserve(pool.size());
  for (const Skill* s : pool) out.push_back(*s);
  return out;
}

std::vector<std::string> pool_ids(const std::vector<const Skill*>& pool) {
  std::vector<std::string> ids;
  ids.reserve(pool.size());
  for (const Skill* s : pool) ids.push_back(s->skill_id);
  return ids;
}

std::vector<int> sorted_ks(const RunConfig& config) {
  std::vector<int> ks = config.ks;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

std::vector<TopKCall> topk_calls(const std::vector<TopKItem>& items, const RunConfig& config) {
  const auto ks = sorted_ks(config);
  std::vector<TopKCall> calls;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (it.stage_one_error) continue;
    for (int k : ks) {
      if (static_cast<size_t>(k) > it.pool.size()) {
        throw Error(ErrorCode::KExceedsCandidates, "item " + it.item->item_id + ": k=" + std::to_string(k) +
                                                       " but only " + std::to_string(it.pool.size()) +
                                                       " candidates");
      }
    }
    auto add = [&](int k) {
      ModelRequest req;
      req.model_id = config.model_id;
      req.prompt = render_topk_prompt(*it.item, copy_pool(it.pool), k);
      req.temperature = config.effective_temperature();
      req.max_output_tokens = config.max_output_tokens;
      req.request_tag = it.item->item_id + "|k" + std::to_string(k);
      calls.push_back({i, k, {req.request_tag, topk_template(k).id(), std::move(req)}});
    };
    if (config.topk_mode == TopKMode::RankedList) {
      add(ks.back());
    } else {
      for (int k : ks) add(k);
    }
  }
  return calls;
}

OpenSetRecord base_record(const TopKItem& it, int k) {
  OpenSetRecord rec;
  rec.item_id = it.item->item_id;
  rec.grade = it.item->grade;
  rec.subject = it.item->subject;
  rec.true_skill_id = it.truth;
  rec.k = k;
  rec.candidate_ids = pool_ids(it.pool);
  rec.retrieval_rank = it.retrieval_rank;
  rec.pool_size = it.pool_size;
  return rec;
}

void score(OpenSetRecord& rec, const std::string& raw, int parse_k, const RunConfig& config) {
  rec.raw_response = raw;
  try {
    auto sel = parse_topk_selection(raw, rec.candidate_ids, parse_k, config.topk_mode);
    auto& ids = sel.ranked_skill_ids;
    if (ids.size() > static_cast<size_t>(rec.k)) ids.resize(static_cast<size_t>(rec.k));
    rec.selection = ids;
    const bool hit = std::find(ids.begin(), ids.end(), rec.true_skill_id) != ids.end();
    rec.outcome = hit ? Outcome::Correct : Outcome::Incorrect;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoValidIds && e.code() != ErrorCode::ForeignId) throw;
    rec.outcome = Outcome::Unparseable;
    rec.error = e.code();
    rec.error_message = e.detail();
  }
}

OpenSetRun execute_topk(const std::vector<TopKItem>& items, const TaskContext& ctx, const RunConfig& config,
                        std::optional<size_t> filter_n) {
  const auto ks = sorted_ks(config);
  const auto calls = topk_calls(items, config);

  struct Reply {
    std::optional<std::string> text;
    std::optional<Error> error;
  };
  std::vector<Reply> replies(calls.size());
  parallel_for(calls.size(), config.concurrency, [&](size_t i) {
    try {
      replies[i].text = ctx.gateway.complete(calls[i].plan.request).raw_text;
    } catch (const Error& e) {
      if (!is_backend_error(e.code())) throw;
      replies[i].error = e;
    }
  });

  std::map<std::pair<size_t, int>, size_t> call_of;
  for (size_t c = 0; c < calls.size(); ++c) call_of[{calls[c].item_index, calls[c].k}] = c;

  OpenSetRun run;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    for (int k : ks) {
      OpenSetRecord rec = base_record(it, k);
      if (it.stage_one_error) {
        rec.outcome = Outcome::Error;
        rec.error = it.stage_one_error->code();
        rec.error_message = it.stage_one_error->detail();
        run.records.push_back(std::move(rec));
        continue;
      }
      const int call_k = config.topk_mode == TopKMode::RankedList ? ks.back() : k;
      const Reply& reply = replies[call_of.at({i, call_k})];
      if (reply.error) {
        rec.outcome = Outcome::Error;
        rec.error = reply.error->code();
        rec.error_message = reply.error->detail();
      } else {
        score(rec, *reply.text, call_k, config);
      }
      if (filter_n && rec.outcome != Outcome::Error &&
          std::find(rec.candidate_ids.begin(), rec.candidate_ids.end(), rec.true_skill_id) == rec.candidate_ids.end()) {
        rec.outcome = Outcome::RetrievalMiss;
      }
      run.records.push_back(std::move(rec));
    }
  }
  run.summary = summarize_open_set(run.records, ks, filter_n);
  return run;
}

TopKItem topk_item(const AlignedLink& link, const TaskContext& ctx) {
  TopKItem it;
  it.item = &ctx.bank.at(link.item_id);
  it.truth = link.skill_id;
  const Skill* truth = ctx.catalog.find(link.skill_id);
  if (!truth) throw Error(ErrorCode::TrueSkillNotInCatalog, link.item_id + " -> " + link.skill_id);
  if (truth->grade != it.item->grade || truth->subject != it.item->subject) {
    throw Error(ErrorCode::InvalidRecord, "item " + link.item_id + " is tagged with " + link.skill_id +
                                              " from another grade or subject");
  }
  for (const auto& s : ctx.catalog.candidate_pool(it.item->grade, it.item->subject)) it.pool.push_back(&s);
  it.pool_size = it.pool.size();
  return it;
}

std::vector<TopKItem> full_pool_items(std::span<const AlignedLink> links, const TaskContext& ctx) {
  std::vector<TopKItem> items;
  items.reserve(links.size());
  for (const auto& l : links) items.push_back(topk_item(l, ctx));
  return items;
}

std::vector<TopKItem> filtered_items(std::span<const AlignedLink> links, const TaskContext& ctx,
                                     const RunConfig& config) {
  if (!ctx.embedder) throw Error(ErrorCode::InvalidConfig, "filtered classification needs an embedding provider");
  auto items = full_pool_items(links, ctx);
  SkillEmbeddingIndex index(*ctx.embedder, config.skill_text);
  parallel_for(items.size(), config.concurrency, [&](size_t i) {
    auto& it = items[i];
    try {
      const auto& vecs = index.pool_vectors(ctx.catalog, it.item->grade, it.item->subject);
      auto item_vec = ctx.embedder->embed(item_text_for_embedding(*it.item));
      auto ranked = rank_candidates(it.item->item_id, item_vec, vecs);
      const size_t rank = ranked.rank_of(it.truth);
      if (rank > 0) it.retrieval_rank = rank;
      const auto kept = filter_top_n(ranked, config.filter_n);
      const std::set<std::string> keep(kept.begin(), kept.end());
      std::erase_if(it.pool, [&](const Skill* s) { return !keep.count(s->skill_id); });
    } catch (const Error& e) {
      it.stage_one_error = e;
    }
  });
  return items;
}

std::vector<PlannedPrompt> plans_of(const std::vector<TopKCall>& calls) {
  std::vector<PlannedPrompt> out;
  out.reserve(calls.size());
  for (const auto& c : calls) out.push_back(c.plan);
  return out;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void check_monotone(const std::map<int, TopKCell>& cells, const std::string& label, std::vector<std::string>& out) {
  std::optional<std::pair<int, double>> prev;
  for (const auto& [k, cell] : cells) {
    auto acc = cell.accuracy();
    if (!acc) continue;
    if (prev && *acc < prev->second) {
      out.push_back(label + ": top-" + std::to_string(k) + " accuracy " + fmt2(*acc) + " is below top-" +
                    std::to_string(prev->first) + " accuracy " + fmt2(prev->second));
    }
    prev = {k, *acc};
  }
}

}  // namespace

// --- config ------------------------------------------------------------------

std::string_view to_string(TaskKind k) {
  switch (k) {
    case TaskKind::BinaryAudit: return "binary-audit";
    case TaskKind::OpenSet: return "open-set";
    case TaskKind::FilteredOpenSet: return "filtered-open-set";
    case TaskKind::Ensemble: return "ensemble";
  }
  return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view s) {
  for (auto k : {TaskKind::BinaryAudit, TaskKind::OpenSet, TaskKind::FilteredOpenSet, TaskKind::Ensemble}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

double RunConfig::effective_temperature() const {
  if (temperature) return *temperature;
  return kind == TaskKind::BinaryAudit || kind == TaskKind::Ensemble ? 1.0 : 0.0;
}

double RunConfig::temperature_for_repeat(int repeat) const {
  if (!temperature_schedule.empty()) return temperature_schedule.at(static_cast<size_t>(repeat));
  return effective_temperature();
}

void validate(const RunConfig& c) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  if (c.model_id.empty()) bad("model_id is empty");
  auto check_t = [&](double t) {
    if (!std::isfinite(t) || t < 0.0 || t > 2.0) bad("temperature must lie in [0, 2]");
  };
  check_t(c.effective_temperature());
  for (double t : c.temperature_schedule) check_t(t);
  if (c.max_output_tokens <= 0) bad("max_output_tokens must be positive");
  if (c.concurrency == 0) bad("concurrency must be at least 1");
  if (c.kind == TaskKind::OpenSet || c.kind == TaskKind::FilteredOpenSet) {
    if (c.ks.empty()) bad("at least one k is required");
    for (int k : c.ks) {
      if (k < 1) bad("k must be at least 1");
    }
  }
  if (c.kind == TaskKind::FilteredOpenSet) {
    if (c.filter_n < 1) bad("filter size must be at least 1");
    const int kmax = *std::max_element(c.ks.begin(), c.ks.end());
    if (c.filter_n < static_cast<size_t>(kmax)) bad("filter size must be at least the largest k");
  }
  if (c.kind == TaskKind::Ensemble) {
    if (c.repeats < 2) bad("an ensemble needs at least 2 repeats");
    if (!c.temperature_schedule.empty() && c.temperature_schedule.size() != static_cast<size_t>(c.repeats)) {
      bad("temperature schedule needs one entry per repeat");
    }
  }
  if (!(c.agreement_threshold > 0.0 && c.agreement_threshold <= 1.0)) bad("agreement threshold must lie in (0, 1]");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Correct: return "correct";
    case Outcome::Incorrect: return "incorrect";
    case Outcome::Unparseable: return "unparseable";
    case Outcome::RetrievalMiss: return "retrieval-miss";
    case Outcome::Error: return "error";
  }
  return "?";
}

std::optional<Outcome> parse_outcome(std::string_view s) {
  for (auto o : {Outcome::Correct, Outcome::Incorrect, Outcome::Unparseable, Outcome::RetrievalMiss, Outcome::Error}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

void parallel_for(size_t n, size_t workers, const std::function<void(size_t)>& fn) {
  workers = std::max<size_t>(1, std::min(workers, n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i; !stop.load() && (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
          stop = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

// --- binary ------------------------------------------------------------------

void BinaryCell::add(const BinaryRecord& r) {
  ++n;
  if (r.outcome == Outcome::Unparseable) {
    ++unparseable;
    return;
  }
  if (r.outcome == Outcome::Error) {
    ++errors;
    return;
  }
  const AlignmentLabel predicted = r.verdict == Verdict::Kind::Misaligned ? AlignmentLabel::Misaligned
                                                                          : AlignmentLabel::Aligned;
  cm.add(r.truth, predicted);
  auto& [correct, scored] = tiers[bucket_of(r.truth, r.tier)];
  ++scored;
  if (r.outcome == Outcome::Correct) ++correct;
}

BinarySummary summarize_binary(std::span<const BinaryRecord> records) {
  BinarySummary s;
  for (const auto& r : records) {
    s.overall.add(r);
    s.strata[{r.grade, r.subject}].add(r);
  }
  return s;
}

BinaryRun run_binary_audit(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config) {
  validate(config);
  const auto units = binary_units(pairs, ctx, config, 1, false);
  BinaryRun run;
  run.records = execute_binary(units, ctx, config.concurrency);
  run.summary = summarize_binary(run.records);
  return run;
}

std::vector<PlannedPrompt> plan_binary_audit(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config) {
  validate(config);
  std::vector<PlannedPrompt> out;
  for (auto& u : binary_units(pairs, ctx, config, 1, false)) out.push_back(std::move(u.plan));
  return out;
}

// --- top-k -------------------------------------------------------------------

std::optional<double> TopKCell::accuracy() const {
  if (n == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(n);
}

std::optional<double> TopKCell::accuracy_parsed_only() const {
  const size_t d = n - unparseable - errors;
  if (d == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(d);
}

void TopKCell::add(const OpenSetRecord& r) {
  ++n;
  switch (r.outcome) {
    case Outcome::Correct: ++hits; break;
    case Outcome::Incorrect: break;
    case Outcome::Unparseable: ++unparseable; break;
    case Outcome::RetrievalMiss: ++retrieval_misses; break;
    case Outcome::Error: ++errors; break;
  }
}

std::vector<size_t> recall_cutoffs(size_t filter_n) {
  std::vector<size_t> c = {1, 3, 5, 10, 15, 20};
  if (std::find(c.begin(), c.end(), filter_n) == c.end()) c.push_back(filter_n);
  std::sort(c.begin(), c.end());
  return c;
}

OpenSetSummary summarize_open_set(std::span<const OpenSetRecord> records, std::span<const int> ks,
                                  std::optional<size_t> filter_n) {
  OpenSetSummary s;
  for (const auto& r : records) {
    s.overall[r.k].add(r);
    s.strata[{r.grade, r.subject}][r.k].add(r);
  }
  if (filter_n) {
    s.filtered = true;
    s.filter_n = *filter_n;
    s.recall_cutoffs = recall_cutoffs(*filter_n);
    const int first_k = ks.empty() ? 1 : *std::min_element(ks.begin(), ks.end());
    for (const auto& r : records) {
      if (r.k != first_k) continue;  // one row per item
      auto& strat = s.recall_strata[{r.grade, r.subject}];
      for (RecallCell* cell : {&s.recall_overall, &strat}) {
        ++cell->n;
        for (size_t c : s.recall_cutoffs) {
          auto& h = cell->hits[c];
          if (r.retrieval_rank && *r.retrieval_rank <= c) ++h;
        }
      }
    }
  }
  check_monotone(s.overall, "all", s.monotonicity_violations);
  for (const auto& [st, cells] : s.strata) {
    check_monotone(cells, std::string(to_string(st.first)) + " " + std::string(to_string(st.second)),
                   s.monotonicity_violations);
  }
  return s;
}

OpenSetRun run_open_set(std::span<const AlignedLink> links, const TaskContext& ctx, const RunConfig& config) {
  validate(config);
  return execute_topk(full_pool_items(links, ctx), ctx, config, std::nullopt);
}

std::vector<PlannedPrompt> plan_open_set(std::span<const AlignedLink> links, const TaskContext& ctx,
                                         const RunConfig& config) {
  validate(config);
  return plans_of(topk_calls(full_pool_items(links, ctx), config));
}

OpenSetRun run_filtered_open_set(std::span<const AlignedLink> links, const TaskContext& ctx,
                                 const RunConfig& config) {
  validate(config);
  return execute_topk(filtered_items(links, ctx, config), ctx, config, config.filter_n);
}

std::vector<PlannedPrompt> plan_filtered_open_set(std::span<const AlignedLink> links, const TaskContext& ctx,
                                                  const RunConfig& config) {
  validate(config);
  return plans_of(topk_calls(filtered_items(links, ctx, config), config));
}

// --- ensemble ----------------------------------------------------------------

EnsembleSummary summarize_ensemble(std::span<const BinaryRecord> records, int repeats, double threshold) {
  EnsembleSummary s;
  std::map<std::pair<std::string, std::string>, size_t> index;
  for (const auto& r : records) {
    auto [it, fresh] = index.try_emplace({r.item_id, r.skill_id}, s.items.size());
    if (fresh) {
      EnsembleItem e;
      e.item_id = r.item_id;
      e.skill_id = r.skill_id;
      e.grade = r.grade;
      e.subject = r.subject;
      e.truth = r.truth;
      e.tier = r.tier;
      s.items.push_back(std::move(e));
    }
    auto& e = s.items[it->second];
    if (r.outcome == Outcome::Unparseable || r.outcome == Outcome::Error) ++e.no_verdict;
    else if (r.verdict == Verdict::Kind::Misaligned) ++e.misaligned;
    else ++e.aligned;
  }
  for (auto& e : s.items) {
    const int total = e.aligned + e.misaligned + e.no_verdict;
    const int top = std::max({e.aligned, e.misaligned, e.no_verdict});
    e.agreement = static_cast<double>(top) / static_cast<double>(total);
    const int ties = (e.aligned == top) + (e.misaligned == top) + (e.no_verdict == top);
    if (ties > 1) e.modal = "tie";
    else if (e.aligned == top) e.modal = "aligned";
    else if (e.misaligned == top) e.modal = "misaligned";
    else e.modal = "none";
    if (e.agreement < threshold) {
      e.flagged = true;
      e.flag_reason = "agreement " + fmt2(e.agreement) + " below " + fmt2(threshold);
    } else if (e.modal == "none") {
      e.flagged = true;
      e.flag_reason = "no verdict in most repeats";
    }
  }

  s.per_repeat.assign(static_cast<size_t>(std::max(repeats, 0)), ConfusionMatrix{});
  for (const auto& r : records) {
    if (r.repeat < 0 || r.repeat >= repeats) continue;
    if (r.outcome != Outcome::Correct && r.outcome != Outcome::Incorrect) continue;
    s.per_repeat[static_cast<size_t>(r.repeat)].add(
        r.truth, r.verdict == Verdict::Kind::Misaligned ? AlignmentLabel::Misaligned : AlignmentLabel::Aligned);
  }
  std::vector<double> defined;
  for (const auto& cm : s.per_repeat) {
    std::optional<double> f1;
    if (cm.total() > 0) f1 = metric_suite(cm).f1;
    s.f1_per_repeat.push_back(f1);
    if (f1) defined.push_back(*f1);
  }
  s.f1_mean = mean(defined);
  s.f1_stddev = sample_stddev(defined);
  s.pooled = summarize_binary(records);
  return s;
}

EnsembleRun run_ensemble(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config) {
  validate(config);
  const auto units = binary_units(pairs, ctx, config, config.repeats, true);
  EnsembleRun run;
  run.records = execute_binary(units, ctx, config.concurrency);
  run.summary = summarize_ensemble(run.records, config.repeats, config.agreement_threshold);
  return run;
}

std::vector<PlannedPrompt> plan_ensemble(const PairSet& pairs, const TaskContext& ctx, const RunConfig& config) {
  validate(config);
  std::vector<PlannedPrompt> out;
  for (auto& u : binary_units(pairs, ctx, config, config.repeats, true)) out.push_back(std::move(u.plan));
  return out;
}

}  // namespace alignaudit
