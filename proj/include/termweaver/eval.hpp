#pragma once

#include <optional>
#include <string>
#include <vector>

#include "termweaver/glossary.hpp"
#include "termweaver/term_trie.hpp"

namespace termweaver {

enum class TokenizerMode { chars, pretokenized };

const char* tokenizer_mode_name(TokenizerMode m);
TokenizerMode tokenizer_mode_from_name(const std::string& name);

// chars: one token per non-whitespace Unicode scalar.
// pretokenized: split on whitespace runs (externally segmented input).
std::vector<std::string> tokenize(const std::string& text, TokenizerMode mode);

struct TokenizedCorpus {
  std::vector<std::vector<std::string>> sentences;
  TokenizerMode mode = TokenizerMode::chars;
};

TokenizedCorpus tokenize_corpus(const std::vector<std::string>& lines, TokenizerMode mode);

enum class BleuSmoothing { none, add_epsilon };

// Corpus BLEU on pooled counts, scaled to [0, 100]. N-gram orders with no
// hypothesis n-grams at all are excluded from the geometric mean.
double bleu(const TokenizedCorpus& hyps, const TokenizedCorpus& refs, int max_n = 4,
            BleuSmoothing smoothing = BleuSmoothing::none);

// Corpus RIBES in [0, 1]: mean over sentences of NKT * P^alpha * BP^beta.
double ribes(const TokenizedCorpus& hyps, const TokenizedCorpus& refs,
             double alpha = 0.25, double beta = 0.10);

double sentence_ribes(const std::vector<std::string>& hyp,
                      const std::vector<std::string>& ref, double alpha = 0.25,
                      double beta = 0.10);

// Kendall's tau over a sequence of rank values (ties count as discordant).
// Requires at least 2 elements.
double kendall_tau(const std::vector<std::size_t>& ranks);

struct TermRecallResult {
  double recall = 1.0;
  std::size_t matched_terms = 0;
  std::size_t satisfied_terms = 0;
  bool vacuous = false;  // no glossary term matched anywhere
};

// Per line: each unique matched source term counts once; satisfied iff any
// of its target alternatives occurs in the hypothesis line.
TermRecallResult term_recall(const std::vector<std::string>& src_lines,
                             const std::vector<std::string>& hyp_lines,
                             const TermTrie& trie, const Glossary& glossary);

struct EvalReport {
  std::string label;
  double bleu = 0.0;
  double ribes = 0.0;
  std::optional<double> term_recall;
  bool term_recall_vacuous = false;
  std::size_t n_sentences = 0;
  TokenizerMode tokenizer_mode = TokenizerMode::chars;
  std::optional<std::vector<double>> sentence_ribes;  // per-sentence breakdown

  std::string to_json() const;
  static EvalReport from_json(const std::string& json_text);
};

struct RunComparison {
  EvalReport a;
  EvalReport b;
  double bleu_delta = 0.0;
  double ribes_delta = 0.0;
  std::optional<double> term_recall_delta;

  std::string to_text() const;
  std::string to_json() const;
};

// Throws CorpusMismatch when the reports do not cover the same reference
// corpus (sentence count / tokenizer mode).
RunComparison compare_runs(const EvalReport& a, const EvalReport& b);

}  // namespace termweaver
