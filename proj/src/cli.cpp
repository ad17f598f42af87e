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

#include "alignaudit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "alignaudit/config.hpp"
#include "alignaudit/corpus.hpp"
#include "alignaudit/gateway.hpp"
#include "alignaudit/prompts.hpp"
#include "alignaudit/report.hpp"
#include "alignaudit/retrieval.hpp"
#include "alignaudit/table_io.hpp"
#include "alignaudit/tasks.hpp"

namespace alignaudit {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::string skills;
  std::string items;
  std::string out_dir;
  std::string backend = "openai";
  std::string model;
  double temperature = 0.0;
  int max_tokens = 0;
  size_t concurrency = 0;
  int rpm = 0;
  std::uint64_t seed = 0;
  bool dry_run = false;
  bool force = false;

  CLI::Option* temperature_opt = nullptr;
  CLI::Option* max_tokens_opt = nullptr;
  CLI::Option* concurrency_opt = nullptr;
  CLI::Option* rpm_opt = nullptr;
};

struct BinaryOptions {
  std::string pairs;
  std::string prompt = "zero-shot";
  std::string exemplars;
  bool ground_truth_only = false;
  int repeats = 5;
  double threshold = 0.8;
  std::vector<double> temperatures;
};

struct ClassifyOptions {
  std::vector<int> ks = {1, 3, 5};
  std::string mode = "separate";
  size_t filter = 0;
  std::string skill_text = "name+statement";
  CLI::Option* filter_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON settings file")->check(CLI::ExistingFile);
  cmd->add_option("--skills", o.skills, "skills table (csv, tsv or jsonl)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--items", o.items, "item bank (csv, tsv or jsonl)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_dir, "run directory");
  cmd->add_option("--backend", o.backend, "openai | mock:<map.json> | offline")->capture_default_str();
  cmd->add_option("--model", o.model, "model id");
  o.temperature_opt = cmd->add_option("--temperature", o.temperature, "sampling temperature")->check(CLI::Range(0.0, 2.0));
  o.max_tokens_opt = cmd->add_option("--max-tokens", o.max_tokens, "completion token budget")->check(CLI::PositiveNumber);
  o.concurrency_opt = cmd->add_option("--concurrency", o.concurrency, "calls in flight")->check(CLI::PositiveNumber);
  o.rpm_opt = cmd->add_option("--rpm", o.rpm, "request budget per minute, 0 = none")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "run seed")->capture_default_str();
  cmd->add_flag("--dry-run", o.dry_run, "render prompts without calling a backend");
  cmd->add_flag("--force", o.force, "reuse a run directory that already holds a transcript");
}

void add_binary(CLI::App* cmd, BinaryOptions& o) {
  cmd->add_option("--pairs", o.pairs, "labeled pairs from `synthesize`")->check(CLI::ExistingFile);
  cmd->add_option("--prompt", o.prompt, "zero-shot | few-shot | strict")
      ->check(CLI::IsMember({"zero-shot", "few-shot", "strict"}))
      ->capture_default_str();
  cmd->add_option("--exemplars", o.exemplars, "few-shot exemplar file")->check(CLI::ExistingFile);
  cmd->add_flag("--ground-truth-only", o.ground_truth_only, "audit the bank's own tags, no distractors");
}

std::string relative_to(const fs::path& p, const fs::path& base) {
  std::error_code ec;
  auto rel = fs::relative(fs::weakly_canonical(p), fs::weakly_canonical(base), ec);
  if (ec || rel.empty()) return fs::absolute(p).generic_string();
  return rel.generic_string();
}

AppConfig load_settings(const CommonOptions& o) {
  AppConfig cfg = o.config_path.empty() ? AppConfig{} : load_app_config(o.config_path);
  apply_env(cfg, [](const char* n) { return std::getenv(n); });
  if (!o.model.empty()) cfg.model_id = o.model;
  if (o.temperature_opt && o.temperature_opt->count()) cfg.temperature = o.temperature;
  if (o.max_tokens_opt && o.max_tokens_opt->count()) cfg.max_output_tokens = o.max_tokens;
  if (o.concurrency_opt && o.concurrency_opt->count()) cfg.concurrency = o.concurrency;
  if (o.rpm_opt && o.rpm_opt->count()) cfg.requests_per_minute = o.rpm;
  return cfg;
}

RunConfig base_run_config(TaskKind kind, const AppConfig& app, std::uint64_t seed) {
  RunConfig c;
  c.kind = kind;
  c.model_id = app.model_id;
  c.temperature = app.temperature;
  c.max_output_tokens = app.max_output_tokens;
  c.concurrency = app.concurrency;
  c.seed = seed;
  return c;
}

std::unique_ptr<ChatBackend> make_backend(const std::string& spec, const AppConfig& app) {
  if (spec.rfind("mock:", 0) == 0) return std::make_unique<MockBackend>(MockBackend::from_file(spec.substr(5)));
  if (spec == "offline") return std::make_unique<OfflineBackend>();
  if (spec == "openai") {
    if (app.chat.api_key.empty()) {
      throw UsageError("the openai backend needs OPENAI_API_KEY (or ALIGNAUDIT_API_KEY)");
    }
    return std::make_unique<OpenAiChatBackend>(app.chat);
  }
  throw UsageError("unknown backend '" + spec + "'");
}

// Replays only what an embedding cache already holds.
class OfflineEmbedder final : public EmbeddingProvider {
 public:
  OfflineEmbedder(std::string id, size_t dim) : id_(std::move(id)), dim_(dim) {}
  EmbeddingVector embed(std::string_view) override {
    throw Error(ErrorCode::ProviderUnavailable, "embedding not in the run's cache");
  }
  std::string id() const override { return id_; }
  size_t dimension() const override { return dim_; }

 private:
  std::string id_;
  size_t dim_;
};

struct EmbedderStack {
  std::unique_ptr<EmbeddingProvider> base;
  std::unique_ptr<CachedEmbedder> cached;
  json settings;

  EmbeddingProvider* get() { return cached ? static_cast<EmbeddingProvider*>(cached.get()) : base.get(); }
};

EmbedderStack make_embedder(const EmbeddingSettings& s, const fs::path& run_dir) {
  EmbedderStack st;
  if (s.provider == "remote") {
    st.base = std::make_unique<RemoteEmbedder>(s.remote);
    st.cached = std::make_unique<CachedEmbedder>(*st.base, run_dir / "embeddings.jsonl");
    st.settings = {{"provider", "remote"}, {"id", st.base->id()}, {"dimension", s.remote.dimension}};
  } else {
    st.base = std::make_unique<HashProjectionEmbedder>(s.dimension, s.seed);
    st.settings = {{"provider", "hash"}, {"id", st.base->id()}, {"dimension", s.dimension}, {"seed", s.seed}};
  }
  return st;
}

EmbedderStack embedder_from_manifest(const json& j, const fs::path& run_dir) {
  EmbedderStack st;
  st.settings = j;
  const auto provider = j.value("provider", "hash");
  if (provider == "hash") {
    st.base = std::make_unique<HashProjectionEmbedder>(j.at("dimension").get<size_t>(), j.at("seed").get<std::uint64_t>());
  } else {
    st.base = std::make_unique<OfflineEmbedder>(j.at("id").get<std::string>(), j.at("dimension").get<size_t>());
    st.cached = std::make_unique<CachedEmbedder>(*st.base, run_dir / "embeddings.jsonl");
  }
  return st;
}

void prepare_run_dir(const fs::path& dir, bool force) {
  if (dir.empty()) throw UsageError("--out is required unless --dry-run is given");
  fs::create_directories(dir);
  const auto t = dir / "transcript.jsonl";
  if (fs::exists(t)) {
    if (!force) throw UsageError(dir.string() + " already holds a transcript; pass --force to replace it");
    fs::remove(t);
  }
}

bool any_backend_error(const RunResult& r) {
  return std::visit(
      [](const auto& run) {
        for (const auto& rec : run.records) {
          if (rec.outcome == Outcome::Error && rec.error && is_backend_error(*rec.error)) return true;
        }
        return false;
      },
      r);
}

void print_summary(std::ostream& out, const RunResult& r) {
  std::visit(
      [&](const auto& run) {
        using T = std::decay_t<decltype(run)>;
        if constexpr (std::is_same_v<T, BinaryRun>) {
          const auto& c = run.summary.overall;
          out << "pairs " << c.n << ", scored " << c.cm.total() << ", unparseable " << c.unparseable << ", errors "
              << c.errors << "\n";
          if (c.cm.total() > 0) {
            auto m = metric_suite(c.cm);
            out << "accuracy " << format_metric(m.accuracy) << ", precision " << format_metric(m.precision)
                << ", recall " << format_metric(m.recall) << ", specificity " << format_metric(m.specificity)
                << ", f1 " << format_metric(m.f1) << "\n";
          }
        } else if constexpr (std::is_same_v<T, OpenSetRun>) {
          for (const auto& [k, c] : run.summary.overall) {
            out << "top-" << k << " accuracy " << format_metric(c.accuracy()) << " (" << c.hits << "/" << c.n
                << ", unparseable " << c.unparseable << ", errors " << c.errors;
            if (run.summary.filtered) out << ", retrieval misses " << c.retrieval_misses;
            out << ")\n";
          }
          if (run.summary.filtered) {
            const auto& rc = run.summary.recall_overall;
            auto it = rc.hits.find(run.summary.filter_n);
            const size_t h = it == rc.hits.end() ? 0 : it->second;
            out << "retrieval recall@" << run.summary.filter_n << " " << h << "/" << rc.n << "\n";
          }
          for (const auto& v : run.summary.monotonicity_violations) out << "note: " << v << "\n";
        } else {
          size_t flagged = 0;
          for (const auto& e : run.summary.items) flagged += e.flagged;
          out << "pairs " << run.summary.items.size() << ", repeats " << run.summary.per_repeat.size()
              << ", flagged " << flagged << ", f1 mean " << format_metric(run.summary.f1_mean) << ", f1 sd "
              << format_metric(run.summary.f1_stddev) << "\n";
        }
      },
      r);
}

void write_plan(std::ostream& out, const fs::path& out_dir, const std::vector<PlannedPrompt>& plan) {
  std::ostringstream buf;
  for (const auto& p : plan) {
    buf << json{{"request_tag", p.request_tag},
                {"template", p.template_id},
                {"cache_key", cache_key(p.request)},
                {"model_id", p.request.model_id},
                {"temperature", p.request.temperature},
                {"prompt", p.request.prompt}}
               .dump()
        << "\n";
  }
  if (out_dir.empty()) {
    out << buf.str();
  } else {
    write_file(out_dir / "prompts.jsonl", buf.str());
    out << plan.size() << " prompts written to " << (out_dir / "prompts.jsonl").string() << "\n";
  }
}

// Everything one run needs, loaded either from flags or from a manifest.
struct Inputs {
  SkillCatalog catalog;
  ItemBank bank;
  PairSet pairs;
  std::vector<Exemplar> exemplars;
};

RunResult execute(const RunConfig& config, const TaskContext& ctx, const PairSet& pairs) {
  const auto links = aligned_links(ctx.bank);
  switch (config.kind) {
    case TaskKind::BinaryAudit: return run_binary_audit(pairs, ctx, config);
    case TaskKind::Ensemble: return run_ensemble(pairs, ctx, config);
    case TaskKind::OpenSet: return run_open_set(links, ctx, config);
    case TaskKind::FilteredOpenSet: return run_filtered_open_set(links, ctx, config);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown task kind");
}

std::vector<PlannedPrompt> plan(const RunConfig& config, const TaskContext& ctx, const PairSet& pairs) {
  const auto links = aligned_links(ctx.bank);
  switch (config.kind) {
    case TaskKind::BinaryAudit: return plan_binary_audit(pairs, ctx, config);
    case TaskKind::Ensemble: return plan_ensemble(pairs, ctx, config);
    case TaskKind::OpenSet: return plan_open_set(links, ctx, config);
    case TaskKind::FilteredOpenSet: return plan_filtered_open_set(links, ctx, config);
  }
  return {};
}

std::vector<std::string> template_ids_for(const RunConfig& c) {
  if (c.kind == TaskKind::BinaryAudit || c.kind == TaskKind::Ensemble) return binary_template_ids(c.prompt);
  if (c.topk_mode == TopKMode::RankedList) {
    const int kmax = *std::max_element(c.ks.begin(), c.ks.end());
    return topk_template_ids(std::vector<int>{kmax});
  }
  return topk_template_ids(c.ks);
}

int run_task(RunConfig config, const CommonOptions& common, const BinaryOptions* bin, std::ostream& out) {
  const AppConfig app = load_settings(common);
  const bool binary = config.kind == TaskKind::BinaryAudit || config.kind == TaskKind::Ensemble;
  validate(config);

  Inputs in;
  in.catalog = load_skills_file(common.skills);
  in.bank = load_items_file(common.items);
  if (binary) {
    if (!bin->pairs.empty()) {
      in.pairs = read_pairset(bin->pairs);
    } else if (bin->ground_truth_only) {
      in.pairs = ground_truth_pairs(aligned_links(in.bank));
    } else {
      in.pairs = synthesize(aligned_links(in.bank), in.catalog, common.seed);
    }
    if (config.prompt == BinaryPromptKind::FewShot) {
      if (bin->exemplars.empty()) throw UsageError("--prompt few-shot needs --exemplars");
      in.exemplars = load_exemplars(bin->exemplars);
    }
  }

  const fs::path run_dir = common.out_dir;
  EmbedderStack emb;
  if (config.kind == TaskKind::FilteredOpenSet) emb = make_embedder(app.embedding, run_dir.empty() ? fs::path(".") : run_dir);

  if (common.dry_run) {
    OfflineBackend offline;
    Gateway gw(offline);
    TaskContext ctx{in.catalog, in.bank, gw, in.exemplars, emb.get()};
    if (!run_dir.empty()) fs::create_directories(run_dir);
    write_plan(out, run_dir, plan(config, ctx, in.pairs));
    return kExitOk;
  }

  prepare_run_dir(run_dir, common.force);
  RunManifest m;
  m.tool_version = tool_version();
  m.config = config;
  m.template_ids = template_ids_for(config);
  m.inputs.push_back({"skills", relative_to(common.skills, run_dir), file_sha256(common.skills)});
  m.inputs.push_back({"items", relative_to(common.items, run_dir), file_sha256(common.items)});
  if (binary) {
    write_file(run_dir / "pairs.csv", pairs_to_csv(in.pairs));
    m.inputs.push_back({"pairs", "pairs.csv", file_sha256(run_dir / "pairs.csv")});
    if (!bin->exemplars.empty() && config.prompt == BinaryPromptKind::FewShot) {
      m.inputs.push_back({"exemplars", relative_to(bin->exemplars, run_dir), file_sha256(bin->exemplars)});
    }
  }
  if (config.kind == TaskKind::FilteredOpenSet) m.embedder = emb.settings;

  auto backend = make_backend(common.backend, app);
  m.backend = backend->id();
  GatewayOptions gopt;
  gopt.retry = app.retry;
  gopt.max_in_flight = app.concurrency;
  gopt.requests_per_minute = app.requests_per_minute;
  gopt.transcript_path = run_dir / m.transcript;
  Gateway gw(*backend, gopt);
  TaskContext ctx{in.catalog, in.bank, gw, in.exemplars, emb.get()};

  spdlog::info("running {} with {}", to_string(config.kind), m.backend);
  RunResult result = execute(config, ctx, in.pairs);
  emit_report(run_dir, m, result);

  print_summary(out, result);
  const auto st = gw.stats();
  out << "calls " << st.upstream_calls << ", cache hits " << st.cache_hits << ", retries " << st.retries;
  if (auto cost = estimate_cost(st.usage, config.model_id, app.prices)) out << ", est. cost $" << *cost;
  out << "\nreport " << (run_dir / "report.json").string() << "\n";
  return any_backend_error(result) ? kExitBackend : kExitOk;
}

int run_replay(const fs::path& transcript, std::string manifest_path, std::string out_dir, std::ostream& out) {
  const fs::path src = transcript.has_parent_path() ? transcript.parent_path() : fs::path(".");
  if (manifest_path.empty()) manifest_path = (src / "manifest.json").string();
  json mj;
  try {
    mj = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidRecord, manifest_path + ": " + e.what());
  }
  const RunManifest m = manifest_from_json(mj);
  const fs::path run_dir = fs::path(manifest_path).parent_path().empty() ? fs::path(".")
                                                                            : fs::path(manifest_path).parent_path();
  verify_inputs(run_dir, m);

  Inputs in;
  for (const auto& ref : m.inputs) {
    const auto p = resolve_input(run_dir, ref);
    if (ref.role == "skills") in.catalog = load_skills_file(p);
    else if (ref.role == "items") in.bank = load_items_file(p);
    else if (ref.role == "pairs") in.pairs = read_pairset(p);
    else if (ref.role == "exemplars") in.exemplars = load_exemplars(p);
  }
  EmbedderStack emb;
  if (m.config.kind == TaskKind::FilteredOpenSet) emb = embedder_from_manifest(m.embedder, run_dir);

  OfflineBackend offline;
  Gateway gw(offline);
  gw.preload(read_transcript(transcript));
  TaskContext ctx{in.catalog, in.bank, gw, in.exemplars, emb.get()};
  RunResult result = execute(m.config, ctx, in.pairs);

  const fs::path dest = out_dir.empty() ? run_dir / "replay" : fs::path(out_dir);
  emit_report(dest, m, result);
  print_summary(out, result);
  out << "report " << (dest / "report.json").string() << " sha256 " << file_sha256(dest / "report.json") << "\n";
  return any_backend_error(result) ? kExitBackend : kExitOk;
}

int run_report(const fs::path& run, std::string out_dir, std::ostream& out) {
  const fs::path report = fs::is_directory(run) ? run / "report.json" : run;
  auto [m, result] = read_report(report);
  const fs::path dest = out_dir.empty() ? report.parent_path() : fs::path(out_dir);
  fs::create_directories(dest);
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BinaryRun>) {
          write_file(dest / "summary.csv", binary_summary_csv(r.summary));
          write_file(dest / "tiers.csv", tiers_csv(r.summary));
        } else if constexpr (std::is_same_v<T, OpenSetRun>) {
          write_file(dest / "summary.csv", open_set_summary_csv(r.summary));
          if (r.summary.filtered) write_file(dest / "recall.csv", recall_csv(r.summary));
        } else {
          write_file(dest / "summary.csv", ensemble_summary_csv(r.summary));
          write_file(dest / "tiers.csv", tiers_csv(r.summary.pooled));
          write_file(dest / "agreement.csv", agreement_csv(r.summary));
        }
      },
      result);
  write_file(dest / "triage.csv", triage_csv(result));
  out << to_string(m.config.kind) << " run, " << m.config.model_id << "\n";
  print_summary(out, result);
  return kExitOk;
}

// Mock map answering every prompt of the bank with its ground truth.
int run_make_oracle(const std::string& skills, const std::string& items, const std::string& pairs_path,
                    std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  const auto catalog = load_skills_file(skills);
  const auto bank = load_items_file(items);
  const PairSet pairs = pairs_path.empty() ? synthesize(aligned_links(bank), catalog, seed) : read_pairset(pairs_path);
  MockBackend mock;
  for (const auto& p : pairs.pairs) {
    mock.add_rule({{render_binary_target(bank.at(p.item_id), catalog.at(p.skill_id))},
                   std::string(p.label == AlignmentLabel::Aligned ? "Aligned" : "Misaligned")});
  }
  // Top-k prompts: the item plus its true skill among the candidates. Stems
  // recur across grades, so the item block alone is not unique.
  const auto links = aligned_links(bank);
  for (const auto& l : links) {
    mock.add_rule({{render_item_block(bank.at(l.item_id)), render_candidate_line(catalog.at(l.skill_id))}, l.skill_id});
  }
  // truth filtered out of the pool: answer anyway so the record is a retrieval miss
  for (const auto& l : links) {
    mock.add_rule({{render_item_block(bank.at(l.item_id))}, l.skill_id});
  }
  write_file(out_path, mock.to_json().dump(2) + "\n");
  out << "oracle map with " << pairs.pairs.size() << " binary and " << links.size()
      << " top-k rules written to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  if (is_backend_error(code)) return kExitBackend;
  if (code == ErrorCode::InvalidConfig) return kExitUsage;
  return kExitData;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit and classify item-skill alignment with chat models", "alignaudit"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace | debug | info | warn | error | off")->capture_default_str();

  // synthesize
  auto* syn = app.add_subcommand("synthesize", "build the labeled aligned/misaligned pair set");
  std::string syn_items, syn_skills, syn_out;
  std::uint64_t syn_seed = 0;
  syn->add_option("--items", syn_items, "item bank")->required()->check(CLI::ExistingFile);
  syn->add_option("--skills", syn_skills, "skills table")->required()->check(CLI::ExistingFile);
  syn->add_option("--seed", syn_seed, "seed")->capture_default_str();
  syn->add_option("--out", syn_out, "pairs csv (a .skipped.csv lands next to it)")->required();

  // audit
  auto* aud = app.add_subcommand("audit", "binary alignment audit");
  CommonOptions aud_common;
  BinaryOptions aud_bin;
  add_common(aud, aud_common);
  add_binary(aud, aud_bin);

  // ensemble
  auto* ens = app.add_subcommand("ensemble", "binary audit repeated for agreement statistics");
  CommonOptions ens_common;
  BinaryOptions ens_bin;
  add_common(ens, ens_common);
  add_binary(ens, ens_bin);
  ens->add_option("--repeats", ens_bin.repeats, "samples per pair")->check(CLI::Range(2, 1000))->capture_default_str();
  ens->add_option("--threshold", ens_bin.threshold, "agreement below this is flagged")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ens->add_option("--temperatures", ens_bin.temperatures, "one temperature per repeat")->delimiter(',');

  // classify
  auto* cls = app.add_subcommand("classify", "open-set top-k skill classification");
  CommonOptions cls_common;
  ClassifyOptions cls_opt;
  add_common(cls, cls_common);
  cls->add_option("--k", cls_opt.ks, "k values, comma separated")->delimiter(',')->capture_default_str();
  cls->add_option("--mode", cls_opt.mode, "separate | ranked")
      ->check(CLI::IsMember({"separate", "ranked"}))
      ->capture_default_str();
  cls_opt.filter_opt = cls->add_option("--filter", cls_opt.filter, "keep the N most similar skills first")
                           ->check(CLI::PositiveNumber);
  cls->add_option("--skill-text", cls_opt.skill_text, "name+statement | statement")
      ->check(CLI::IsMember({"name+statement", "statement"}))
      ->capture_default_str();

  // replay
  auto* rep = app.add_subcommand("replay", "re-run a recorded run from its transcript, offline");
  std::string rep_transcript, rep_manifest, rep_out;
  rep->add_option("transcript", rep_transcript, "transcript.jsonl")->required()->check(CLI::ExistingFile);
  rep->add_option("--manifest", rep_manifest, "manifest (default: next to the transcript)");
  rep->add_option("--out", rep_out, "output directory (default: <run>/replay)");

  // report
  auto* rpt = app.add_subcommand("report", "recompute the tables of a finished run");
  std::string rpt_run, rpt_out;
  rpt->add_option("run", rpt_run, "run directory or report.json")->required()->check(CLI::ExistingPath);
  rpt->add_option("--out", rpt_out, "output directory (default: the run directory)");

  // make-oracle
  auto* orc = app.add_subcommand("make-oracle", "write a mock map that answers with the ground truth");
  std::string orc_items, orc_skills, orc_pairs, orc_out;
  std::uint64_t orc_seed = 0;
  orc->add_option("--items", orc_items, "item bank")->required()->check(CLI::ExistingFile);
  orc->add_option("--skills", orc_skills, "skills table")->required()->check(CLI::ExistingFile);
  orc->add_option("--pairs", orc_pairs, "pairs csv (default: synthesize with --seed)")->check(CLI::ExistingFile);
  orc->add_option("--seed", orc_seed, "seed")->capture_default_str();
  orc->add_option("--out", orc_out, "map file")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  if (!spdlog::get("alignaudit")) {
    auto logger = spdlog::stderr_logger_mt("alignaudit");
    spdlog::set_default_logger(logger);
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*syn) {
      const auto catalog = load_skills_file(syn_skills);
      const auto bank = load_items_file(syn_items);
      const auto set = synthesize(aligned_links(bank), catalog, syn_seed);
      write_pairset(set, syn_out);
      out << set.pairs.size() << " pairs, " << set.skipped.size() << " skipped tiers written to " << syn_out << "\n";
      return kExitOk;
    }
    if (*aud || *ens) {
      const bool is_ens = ens->parsed();
      const auto& common = is_ens ? ens_common : aud_common;
      const auto& bin = is_ens ? ens_bin : aud_bin;
      RunConfig c = base_run_config(is_ens ? TaskKind::Ensemble : TaskKind::BinaryAudit, load_settings(common),
                                    common.seed);
      c.prompt = *parse_binary_prompt_kind(bin.prompt);
      if (is_ens) {
        c.repeats = bin.repeats;
        c.agreement_threshold = bin.threshold;
        c.temperature_schedule = bin.temperatures;
      }
      return run_task(c, common, &bin, out);
    }
    if (*cls) {
      const bool filtered = cls_opt.filter_opt->count() > 0;
      RunConfig c = base_run_config(filtered ? TaskKind::FilteredOpenSet : TaskKind::OpenSet,
                                    load_settings(cls_common), cls_common.seed);
      c.ks = cls_opt.ks;
      c.topk_mode = *parse_topk_mode(cls_opt.mode);
      if (filtered) c.filter_n = cls_opt.filter;
      c.skill_text = cls_opt.skill_text == "statement" ? SkillTextMode::StatementOnly : SkillTextMode::NameAndStatement;
      return run_task(c, cls_common, nullptr, out);
    }
    if (*rep) return run_replay(rep_transcript, rep_manifest, rep_out, out);
    if (*rpt) return run_report(rpt_run, rpt_out, out);
    if (*orc) return run_make_oracle(orc_skills, orc_items, orc_pairs, orc_seed, orc_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace alignaudit
