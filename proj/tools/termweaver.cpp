// termweaver: terminology-constrained translation toolkit.
//
// Subcommands: glossary build|merge, match, align-prep, align-validate,
// reconstruct, translate, evaluate. Diagnostics go to stderr; data goes to
// files or stdout. Exit codes: 0 ok, 1 usage, 2 data/validation, 3
// transport/auth.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "termweaver/aligner.hpp"
#include "termweaver/corpus.hpp"
#include "termweaver/errors.hpp"
#include "termweaver/eval.hpp"
#include "termweaver/glossary.hpp"
#include "termweaver/llm_client.hpp"
#include "termweaver/prompt_template.hpp"
#include "termweaver/reconstruct.hpp"
#include "termweaver/run_config.hpp"
#include "termweaver/term_trie.hpp"
#include "termweaver/unicode.hpp"

namespace tw = termweaver;

namespace {

constexpr const char* kVersion = "0.1.0";

tw::GlossaryFormat glossary_format(const std::string& path, const std::string& override_fmt) {
  if (override_fmt == "tsv") return tw::GlossaryFormat::tsv;
  if (override_fmt == "json") return tw::GlossaryFormat::json;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return tw::GlossaryFormat::json;
  return tw::GlossaryFormat::tsv;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw tw::IoError("cannot write " + path);
  return out;
}

// stdout when path is empty or "-".
std::ostream& out_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file = open_out(path);
  return file;
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  if (!out) throw tw::IoError("write failed: " + path);
}

tw::Glossary load_glossary_opt_nfkc(const std::string& path, const std::string& fmt,
                                    bool nfkc, bool merge_duplicates = false) {
  auto g = tw::load_glossary(path, glossary_format(path, fmt), merge_duplicates);
  return nfkc ? tw::nfkc_normalized(g) : g;
}

std::string maybe_nfkc(const std::string& s, bool nfkc) {
  return nfkc ? tw::unicode::nfkc(s) : s;
}

tw::PromptTemplate translation_template(const std::string& path) {
  return path.empty() ? tw::default_translation_template() : tw::load_template(path);
}

tw::PromptTemplate extraction_template(const std::string& path) {
  return path.empty() ? tw::default_extraction_template() : tw::load_template(path);
}

struct Args {
  // shared
  std::string glossary_path, glossary_fmt, input, output, template_path;
  bool nfkc = false;
  // glossary build/merge
  std::vector<std::string> inputs;
  bool merge_duplicates = false;
  // sampling
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  // align-validate
  std::string pairs_path, responses_path, rejections_path, glossary_out;
  double max_fraction = 0.5;
  bool strict = false;
  // reconstruct
  std::size_t entry_cap = tw::kDefaultEntryCap;
  std::string manifest_path;
  // translate
  std::string config_path, endpoint_url, model_name;
  std::optional<double> temperature;
  std::optional<int> concurrency, max_retries;
  // evaluate
  std::string hyp_path, ref_path, src_path, tokenizer = "char", compare_path, label;
  std::string smoothing = "none";
  bool per_sentence = false;
};

int cmd_glossary_build(const Args& a) {
  // --format governs the output; input format follows the input extension.
  const auto g = load_glossary_opt_nfkc(a.input, "", a.nfkc, a.merge_duplicates);
  const auto out_fmt = glossary_format(a.output, a.glossary_fmt);
  tw::save_glossary(g, a.output, out_fmt);
  std::cerr << "wrote " << g.size() << " entries to " << a.output << "\n";
  return 0;
}

int cmd_glossary_merge(const Args& a) {
  tw::Glossary merged;
  for (const auto& path : a.inputs) {
    auto g = load_glossary_opt_nfkc(path, "", a.nfkc, a.merge_duplicates);
    merged = tw::merge(merged, g);
  }
  tw::save_glossary(merged, a.output, glossary_format(a.output, a.glossary_fmt));
  std::cerr << "merged " << a.inputs.size() << " glossaries into " << merged.size()
            << " entries at " << a.output << "\n";
  return 0;
}

int cmd_match(const Args& a) {
  const auto glossary = load_glossary_opt_nfkc(a.glossary_path, a.glossary_fmt, a.nfkc);
  const tw::TermTrie trie(glossary);
  const auto lines = tw::load_lines(a.input);
  std::ofstream file;
  std::ostream& out = out_or_stdout(a.output, file);
  std::size_t line_no = 0;
  for (const auto& raw_line : lines) {
    ++line_no;
    const std::string line = maybe_nfkc(raw_line, a.nfkc);
    for (const auto& span : trie.scan_utf8(line)) {
      nlohmann::ordered_json rec{
          {"line_no", line_no},
          {"start", span.start},
          {"end", span.end},
          {"source_term", span.source_term},
          {"alternatives", glossary.at(span.entry_index).target_alternatives}};
      out << rec.dump() << '\n';
    }
  }
  return 0;
}

int cmd_align_prep(const Args& a) {
  const auto tmpl = extraction_template(a.template_path);
  const auto pairs = tw::load_pairs(a.pairs_path);
  const auto subset = tw::sample_subset(pairs, a.n, a.seed);
  std::ofstream file;
  std::ostream& out = out_or_stdout(a.output, file);
  std::size_t i = 0;
  for (const auto& pair : subset) {
    auto messages = tw::build_extraction_prompt(pair, tmpl);
    nlohmann::ordered_json rec{
        {"id", pair.id.empty() ? std::to_string(i) : pair.id},
        {"messages", tw::messages_to_json(messages)}};
    out << rec.dump() << '\n';
    ++i;
  }
  std::cerr << "prepared " << subset.size() << " extraction prompts\n";
  return 0;
}

// Responses: JSONL records {id?, response} or plain text, one response per
// line, aligned with the (sampled) pairs file.
std::vector<std::string> load_responses(const std::string& path) {
  const auto lines = tw::load_lines(path);
  if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl") {
    std::vector<std::string> out;
    std::size_t line_no = 0;
    for (const auto& line : lines) {
      ++line_no;
      if (line.empty()) continue;
      try {
        auto obj = nlohmann::json::parse(line);
        out.push_back(obj.at("response").get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        throw tw::FormatError(std::string("bad response record: ") + e.what(), line_no);
      }
    }
    return out;
  }
  return lines;
}

int cmd_align_validate(const Args& a) {
  const auto tmpl = extraction_template(a.template_path);
  const auto pairs = tw::load_pairs(a.pairs_path);
  const auto responses = load_responses(a.responses_path);
  if (pairs.size() != responses.size())
    throw tw::LengthMismatch(pairs.size(), responses.size());

  tw::ValidationPolicy policy{a.max_fraction};
  std::vector<tw::ExtractionResult> accepted;
  accepted.reserve(pairs.size());
  std::size_t total_accepted = 0, total_rejected = 0, parse_failures = 0;
  std::ofstream rej_file;
  std::ostream* rej_out = nullptr;
  if (!a.rejections_path.empty()) {
    rej_file = open_out(a.rejections_path);
    rej_out = &rej_file;
  }
  tw::Glossary harvested;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    tw::ExtractionResult parsed;
    try {
      parsed = tw::parse_extraction_response(responses[i], a.strict);
    } catch (const tw::DataError& e) {
      ++parse_failures;
      if (rej_out) {
        nlohmann::ordered_json rec{{"index", i}, {"error", e.what()}};
        *rej_out << rec.dump() << '\n';
      }
    }
    auto outcome = tw::validate_extraction(pairs[i], parsed, policy);
    total_accepted += outcome.accepted.pairs.size();
    total_rejected += outcome.rejections.size();
    if (rej_out) {
      for (const auto& rej : outcome.rejections) {
        nlohmann::ordered_json rec{{"index", i},
                                   {"src_term", rej.pair.first},
                                   {"tgt_term", rej.pair.second},
                                   {"reason", tw::reject_reason_name(rej.reason)}};
        *rej_out << rec.dump() << '\n';
      }
    }
    if (!a.glossary_out.empty()) {
      for (const auto& [src_term, tgt_term] : outcome.accepted.pairs) {
        harvested.add(tw::TermEntry::make(tw::unicode::trim(src_term),
                                          {tw::unicode::trim(tgt_term)}),
                      /*merge_duplicates=*/true);
      }
    }
    accepted.push_back(std::move(outcome.accepted));
  }
  tw::emit_aligner_dataset(pairs, accepted, tmpl, a.output);
  if (!a.glossary_out.empty())
    tw::save_glossary(harvested, a.glossary_out,
                      glossary_format(a.glossary_out, a.glossary_fmt));
  std::cerr << "validated " << pairs.size() << " pairs: " << total_accepted
            << " term pairs accepted, " << total_rejected << " rejected, "
            << parse_failures << " unparseable responses\n";
  return 0;
}

int cmd_reconstruct(const Args& a) {
  const auto glossary = load_glossary_opt_nfkc(a.glossary_path, a.glossary_fmt, a.nfkc);
  const tw::TermTrie trie(glossary);
  const auto tmpl = translation_template(a.template_path);
  auto pairs = tw::load_pairs(a.pairs_path);
  if (a.nfkc) {
    for (auto& p : pairs) {
      p.src = tw::unicode::nfkc(p.src);
      p.tgt = tw::unicode::nfkc(p.tgt);
    }
  }
  const auto count = tw::emit_training_jsonl(pairs, trie, glossary, tmpl, a.output, a.n,
                                             a.seed, a.entry_cap);
  const std::string manifest_path =
      a.manifest_path.empty() ? a.output + ".manifest.json" : a.manifest_path;
  write_text_file(manifest_path, tw::render_run_manifest(count, a.n, a.seed, a.entry_cap));
  std::cerr << "wrote " << count << " training records to " << a.output << "\n";
  return 0;
}

int cmd_translate(const Args& a) {
  tw::RunConfig cfg;
  if (!a.config_path.empty()) cfg = tw::load_run_config(a.config_path);
  if (!a.endpoint_url.empty()) cfg.endpoint_url = a.endpoint_url;
  if (!a.model_name.empty()) cfg.model_name = a.model_name;
  if (a.temperature) cfg.temperature = *a.temperature;
  if (a.concurrency) cfg.concurrency = *a.concurrency;
  if (a.max_retries) cfg.max_retries = *a.max_retries;
  if (!a.glossary_path.empty()) cfg.glossary_path = a.glossary_path;
  if (!a.template_path.empty()) cfg.template_path = a.template_path;
  if (a.entry_cap != tw::kDefaultEntryCap) cfg.entry_cap = a.entry_cap;
  cfg.validate();
  if (cfg.glossary_path.empty()) throw tw::ValidationError("no glossary given");

  const auto glossary = load_glossary_opt_nfkc(cfg.glossary_path, a.glossary_fmt, a.nfkc);
  const tw::TermTrie trie(glossary);
  const auto tmpl = translation_template(cfg.template_path);
  const auto lines = tw::load_lines(a.input);

  std::vector<tw::TranslationJob> jobs;
  jobs.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string src = maybe_nfkc(lines[i], a.nfkc);
    auto entries = tw::select_entries(trie, glossary, src);
    jobs.push_back({std::to_string(i),
                    tw::build_translation_prompt(src, entries, tmpl, cfg.entry_cap)});
  }

  tw::GenerationConfig gen;
  gen.endpoint_url = cfg.endpoint_url;
  gen.model_name = cfg.model_name;
  gen.temperature = cfg.temperature;
  gen.max_retries = cfg.max_retries;
  gen.timeout = std::chrono::milliseconds(cfg.timeout_ms);
  const auto results =
      tw::run_batch(jobs, gen, static_cast<std::size_t>(cfg.concurrency));

  std::ofstream file;
  std::ostream& out = out_or_stdout(a.output, file);
  std::size_t failures = 0;
  for (const auto& r : results) {
    if (r.status == tw::JobStatus::ok) {
      try {
        out << tw::postprocess_translation(*r.output) << '\n';
      } catch (const tw::EmptyOutput&) {
        ++failures;
        std::cerr << "line " << r.id << ": empty model output\n";
        out << '\n';
      }
    } else {
      ++failures;
      std::cerr << "line " << r.id << ": " << r.error.value_or("failed") << '\n';
      out << '\n';
    }
  }
  if (failures > 0) {
    std::cerr << failures << " of " << results.size() << " lines failed\n";
    return 3;
  }
  return 0;
}

int cmd_evaluate(const Args& a) {
  const auto mode = tw::tokenizer_mode_from_name(a.tokenizer);
  const auto hyp_lines = tw::load_lines(a.hyp_path);
  const auto ref_lines = tw::load_lines(a.ref_path);
  const auto hyps = tw::tokenize_corpus(hyp_lines, mode);
  const auto refs = tw::tokenize_corpus(ref_lines, mode);

  tw::EvalReport report;
  report.label = a.label;
  report.n_sentences = hyps.sentences.size();
  report.tokenizer_mode = mode;
  report.bleu = tw::bleu(hyps, refs, 4,
                         a.smoothing == "epsilon" ? tw::BleuSmoothing::add_epsilon
                                                  : tw::BleuSmoothing::none);
  report.ribes = tw::ribes(hyps, refs);
  if (a.per_sentence) {
    std::vector<double> per;
    per.reserve(hyps.sentences.size());
    for (std::size_t i = 0; i < hyps.sentences.size(); ++i)
      per.push_back(tw::sentence_ribes(hyps.sentences[i], refs.sentences[i]));
    report.sentence_ribes = std::move(per);
  }
  if (!a.src_path.empty() && !a.glossary_path.empty()) {
    const auto glossary = load_glossary_opt_nfkc(a.glossary_path, a.glossary_fmt, a.nfkc);
    const tw::TermTrie trie(glossary);
    auto src_lines = tw::load_lines(a.src_path);
    if (a.nfkc)
      for (auto& s : src_lines) s = tw::unicode::nfkc(s);
    const auto tr = tw::term_recall(src_lines, hyp_lines, trie, glossary);
    report.term_recall = tr.recall;
    report.term_recall_vacuous = tr.vacuous;
    if (tr.vacuous) std::cerr << "term recall is vacuous (no glossary matches)\n";
  }

  std::ofstream file;
  std::ostream& out = out_or_stdout(a.output, file);
  out << report.to_json();
  if (!a.compare_path.empty()) {
    std::ifstream in(a.compare_path, std::ios::binary);
    if (!in) throw tw::IoError("cannot open " + a.compare_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto other = tw::EvalReport::from_json(ss.str());
    const auto cmp = tw::compare_runs(report, other);
    std::cerr << cmp.to_text();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"termweaver: terminology-constrained translation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Args a;

  auto add_glossary_opts = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--glossary", a.glossary_path, "glossary file (TSV or JSON)");
    if (required) opt->required();
    cmd->add_option("--glossary-format", a.glossary_fmt, "tsv|json (default: by extension)")
        ->check(CLI::IsMember({"tsv", "json"}));
    cmd->add_flag("--nfkc", a.nfkc, "NFKC-normalize glossary and text");
  };

  auto* glossary = app.add_subcommand("glossary", "build or merge glossaries");
  glossary->require_subcommand(1);
  auto* gbuild = glossary->add_subcommand("build", "validate and convert a glossary file");
  gbuild->add_option("--input,-i", a.input, "input glossary")->required();
  gbuild->add_option("--output,-o", a.output, "output glossary")->required();
  gbuild->add_option("--format", a.glossary_fmt, "tsv|json")
      ->check(CLI::IsMember({"tsv", "json"}));
  gbuild->add_flag("--merge-duplicates", a.merge_duplicates,
                   "union alternatives of duplicate source terms");
  gbuild->add_flag("--nfkc", a.nfkc, "NFKC-normalize terms");
  gbuild->callback([&] { std::exit(cmd_glossary_build(a)); });

  auto* gmerge = glossary->add_subcommand("merge", "merge glossaries in order");
  gmerge->add_option("--inputs,-i", a.inputs, "input glossaries")->required()->expected(-1);
  gmerge->add_option("--output,-o", a.output, "output glossary")->required();
  gmerge->add_option("--format", a.glossary_fmt, "tsv|json")
      ->check(CLI::IsMember({"tsv", "json"}));
  gmerge->add_flag("--merge-duplicates", a.merge_duplicates,
                   "union duplicate sources within one input file");
  gmerge->add_flag("--nfkc", a.nfkc, "NFKC-normalize terms");
  gmerge->callback([&] { std::exit(cmd_glossary_merge(a)); });

  auto* match = app.add_subcommand("match", "scan text for glossary terms");
  add_glossary_opts(match, true);
  match->add_option("--input,-i", a.input, "text file, one line per unit")->required();
  match->add_option("--output,-o", a.output, "spans JSONL (default stdout)");
  match->callback([&] { std::exit(cmd_match(a)); });

  auto* aprep = app.add_subcommand("align-prep", "build term-extraction prompts");
  aprep->add_option("--pairs,-p", a.pairs_path, "parallel pairs (TSV or JSONL)")->required();
  aprep->add_option("--template,-t", a.template_path, "extraction prompt template");
  aprep->add_option("-n", a.n, "sample size (default 1000)");
  aprep->add_option("--seed", a.seed, "sampling seed");
  aprep->add_option("--output,-o", a.output, "prompts JSONL (default stdout)");
  aprep->callback([&] { std::exit(cmd_align_prep(a)); });

  auto* avalid = app.add_subcommand("align-validate",
                                    "validate extraction responses, emit aligner dataset");
  avalid->add_option("--pairs,-p", a.pairs_path, "parallel pairs (TSV or JSONL)")->required();
  avalid->add_option("--responses,-r", a.responses_path,
                     "model responses (JSONL {response} or plain lines)")
      ->required();
  avalid->add_option("--template,-t", a.template_path, "extraction prompt template");
  avalid->add_option("--max-fraction", a.max_fraction,
                     "whole-sentence guard threshold (default 0.5)");
  avalid->add_flag("--strict", a.strict, "reject responses with prose around the mapping");
  avalid->add_option("--output,-o", a.output, "aligner dataset JSONL")->required();
  avalid->add_option("--rejections", a.rejections_path, "rejection report JSONL");
  avalid->add_option("--glossary-out", a.glossary_out, "harvest accepted pairs as a glossary");
  avalid->callback([&] { std::exit(cmd_align_validate(a)); });

  auto* recon = app.add_subcommand("reconstruct", "build translation instruction dataset");
  add_glossary_opts(recon, true);
  recon->add_option("--pairs,-p", a.pairs_path, "parallel pairs (TSV or JSONL)")->required();
  recon->add_option("--template,-t", a.template_path, "translation prompt template");
  recon->add_option("-n", a.n, "sample size (default 1000)");
  recon->add_option("--seed", a.seed, "sampling seed");
  recon->add_option("--entry-cap", a.entry_cap, "max glossary entries per prompt");
  recon->add_option("--output,-o", a.output, "training JSONL")->required();
  recon->add_option("--manifest", a.manifest_path,
                    "run manifest path (default <output>.manifest.json)");
  recon->callback([&] { std::exit(cmd_reconstruct(a)); });

  auto* translate = app.add_subcommand("translate", "translate a file line by line");
  add_glossary_opts(translate, false);
  translate->add_option("--input,-i", a.input, "source text, one line per sentence")->required();
  translate->add_option("--config,-c", a.config_path, "run config (key = value)");
  translate->add_option("--endpoint", a.endpoint_url, "chat-completions endpoint URL");
  translate->add_option("--model", a.model_name, "model name");
  translate->add_option("--temperature", a.temperature, "sampling temperature");
  translate->add_option("--concurrency", a.concurrency, "max in-flight requests");
  translate->add_option("--max-retries", a.max_retries, "retries per request");
  translate->add_option("--template,-t", a.template_path, "translation prompt template");
  translate->add_option("--entry-cap", a.entry_cap, "max glossary entries per prompt");
  translate->add_option("--output,-o", a.output, "hypotheses file (default stdout)");
  translate->callback([&] { std::exit(cmd_translate(a)); });

  auto* evaluate = app.add_subcommand("evaluate", "score hypotheses against references");
  evaluate->add_option("--hyp", a.hyp_path, "hypothesis file")->required();
  evaluate->add_option("--ref", a.ref_path, "reference file")->required();
  evaluate->add_option("--src", a.src_path, "source file (for term recall)");
  evaluate->add_option("--glossary", a.glossary_path, "glossary (for term recall)");
  evaluate->add_option("--glossary-format", a.glossary_fmt, "tsv|json")
      ->check(CLI::IsMember({"tsv", "json"}));
  evaluate->add_flag("--nfkc", a.nfkc, "NFKC-normalize glossary and source");
  evaluate->add_option("--tokenizer", a.tokenizer, "char|pretokenized")
      ->check(CLI::IsMember({"char", "pretokenized"}));
  evaluate->add_option("--smoothing", a.smoothing, "none|epsilon")
      ->check(CLI::IsMember({"none", "epsilon"}));
  evaluate->add_flag("--per-sentence", a.per_sentence, "include per-sentence RIBES");
  evaluate->add_option("--label", a.label, "report label");
  evaluate->add_option("--compare", a.compare_path, "other report JSON to compare against");
  evaluate->add_option("--output,-o", a.output, "report JSON (default stdout)");
  evaluate->callback([&] { std::exit(cmd_evaluate(a)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const tw::TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tw::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
