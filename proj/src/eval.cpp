#include "termweaver/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "termweaver/errors.hpp"
#include "termweaver/unicode.hpp"

namespace termweaver {

const char* tokenizer_mode_name(TokenizerMode m) {
  return m == TokenizerMode::chars ? "char" : "pretokenized";
}

TokenizerMode tokenizer_mode_from_name(const std::string& name) {
  if (name == "char" || name == "chars") return TokenizerMode::chars;
  if (name == "pretokenized") return TokenizerMode::pretokenized;
  throw ValidationError("unknown tokenizer mode: " + name);
}

std::vector<std::string> tokenize(const std::string& text, TokenizerMode mode) {
  std::vector<std::string> out;
  if (mode == TokenizerMode::chars) {
    for (char32_t c : unicode::decode_utf8(text)) {
      if (!unicode::is_whitespace(c)) out.push_back(unicode::encode_utf8(std::u32string(1, c)));
    }
    return out;
  }
  const std::u32string u = unicode::decode_utf8(text);
  std::u32string cur;
  for (char32_t c : u) {
    if (unicode::is_whitespace(c)) {
      if (!cur.empty()) {
        out.push_back(unicode::encode_utf8(cur));
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(unicode::encode_utf8(cur));
  return out;
}

TokenizedCorpus tokenize_corpus(const std::vector<std::string>& lines, TokenizerMode mode) {
  TokenizedCorpus c;
  c.mode = mode;
  c.sentences.reserve(lines.size());
  for (const auto& line : lines) c.sentences.push_back(tokenize(line, mode));
  return c;
}

namespace {

void check_corpora(const TokenizedCorpus& hyps, const TokenizedCorpus& refs) {
  if (hyps.sentences.size() != refs.sentences.size())
    throw LengthMismatch(hyps.sentences.size(), refs.sentences.size());
  if (hyps.sentences.empty()) throw EmptyCorpus();
  if (hyps.mode != refs.mode)
    throw CorpusMismatch("tokenizer modes differ");
}

std::string join_ngram(const std::vector<std::string>& tokens, std::size_t start, int n) {
  std::string key;
  for (int k = 0; k < n; ++k) {
    if (k) key += '\x1f';
    key += tokens[start + k];
  }
  return key;
}

}  // namespace

double bleu(const TokenizedCorpus& hyps, const TokenizedCorpus& refs, int max_n,
            BleuSmoothing smoothing) {
  check_corpora(hyps, refs);
  if (max_n < 1) throw ValidationError("max_n must be >= 1");

  std::vector<double> matched(max_n, 0.0), total(max_n, 0.0);
  std::size_t hyp_len = 0, ref_len = 0;
  bool any_ref = false;

  for (std::size_t s = 0; s < hyps.sentences.size(); ++s) {
    const auto& hyp = hyps.sentences[s];
    const auto& ref = refs.sentences[s];
    hyp_len += hyp.size();
    ref_len += ref.size();
    if (!ref.empty()) any_ref = true;
    for (int n = 1; n <= max_n; ++n) {
      if (hyp.size() < static_cast<std::size_t>(n)) break;
      std::unordered_map<std::string, std::size_t> ref_counts;
      if (ref.size() >= static_cast<std::size_t>(n)) {
        for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[join_ngram(ref, i, n)];
      }
      std::unordered_map<std::string, std::size_t> hyp_counts;
      for (std::size_t i = 0; i + n <= hyp.size(); ++i) ++hyp_counts[join_ngram(hyp, i, n)];
      for (const auto& [gram, count] : hyp_counts) {
        total[n - 1] += static_cast<double>(count);
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end())
          matched[n - 1] += static_cast<double>(std::min(count, it->second));
      }
    }
  }
  if (!any_ref) throw EmptyCorpus();
  if (hyp_len == 0) return 0.0;

  double log_sum = 0.0;
  int orders = 0;
  for (int n = 0; n < max_n; ++n) {
    if (total[n] <= 0.0) continue;  // order unobservable at this corpus size
    ++orders;
    double num = matched[n];
    if (num <= 0.0) {
      if (smoothing == BleuSmoothing::none) return 0.0;
      num = 1e-9;
    }
    log_sum += std::log(num / total[n]);
  }
  if (orders == 0) return 0.0;
  const double bp =
      std::exp(std::min(0.0, 1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len)));
  return 100.0 * bp * std::exp(log_sum / orders);
}

double kendall_tau(const std::vector<std::size_t>& ranks) {
  const std::size_t n = ranks.size();
  if (n < 2) throw ValidationError("kendall_tau needs at least 2 ranks");
  // Concordant (strictly ascending) pair count via merge-sort inversion
  // counting; ties land on the discordant side.
  std::vector<std::size_t> work(ranks), buf(n);
  auto count_non_ascending = [&](auto&& self, std::size_t lo, std::size_t hi) -> std::size_t {
    if (hi - lo < 2) return 0;
    const std::size_t mid = (lo + hi) / 2;
    std::size_t cnt = self(self, lo, mid) + self(self, mid, hi);
    // Count pairs (i in left, j in right) with work[i] >= work[j].
    std::size_t i = lo, j = mid;
    while (i < mid && j < hi) {
      if (work[i] >= work[j]) {
        cnt += mid - i;
        ++j;
      } else {
        ++i;
      }
    }
    std::merge(work.begin() + lo, work.begin() + mid, work.begin() + mid, work.begin() + hi,
               buf.begin() + lo);
    std::copy(buf.begin() + lo, buf.begin() + hi, work.begin() + lo);
    return cnt;
  };
  const std::size_t non_ascending = count_non_ascending(count_non_ascending, 0, n);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double concordant = pairs - static_cast<double>(non_ascending);
  return 2.0 * concordant / pairs - 1.0;
}

namespace {

// Align hypothesis tokens to reference positions: unique unigram match
// first, then one-sided bigram context (left, then right).
std::vector<std::size_t> align_positions(const std::vector<std::string>& hyp,
                                         const std::vector<std::string>& ref) {
  std::unordered_map<std::string, std::vector<std::size_t>> ref_pos;
  for (std::size_t k = 0; k < ref.size(); ++k) ref_pos[ref[k]].push_back(k);
  std::unordered_map<std::string, std::size_t> hyp_count;
  for (const auto& w : hyp) ++hyp_count[w];

  auto ref_bigram_positions = [&](const std::string& a, const std::string& b) {
    std::vector<std::size_t> out;  // position of b
    for (std::size_t k = 0; k + 1 < ref.size(); ++k)
      if (ref[k] == a && ref[k + 1] == b) out.push_back(k + 1);
    return out;
  };
  auto hyp_bigram_count = [&](const std::string& a, const std::string& b) {
    std::size_t c = 0;
    for (std::size_t k = 0; k + 1 < hyp.size(); ++k)
      if (hyp[k] == a && hyp[k + 1] == b) ++c;
    return c;
  };

  std::vector<std::size_t> aligned;
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    const auto& w = hyp[i];
    auto it = ref_pos.find(w);
    if (it == ref_pos.end()) continue;
    if (it->second.size() == 1 && hyp_count[w] == 1) {
      aligned.push_back(it->second[0]);
      continue;
    }
    if (i > 0) {
      auto rp = ref_bigram_positions(hyp[i - 1], w);
      if (rp.size() == 1 && hyp_bigram_count(hyp[i - 1], w) == 1) {
        aligned.push_back(rp[0]);
        continue;
      }
    }
    if (i + 1 < hyp.size()) {
      auto rp = ref_bigram_positions(w, hyp[i + 1]);
      if (rp.size() == 1 && hyp_bigram_count(w, hyp[i + 1]) == 1) {
        aligned.push_back(rp[0] - 1);
        continue;
      }
    }
  }
  return aligned;
}

}  // namespace

double sentence_ribes(const std::vector<std::string>& hyp,
                      const std::vector<std::string>& ref, double alpha, double beta) {
  if (hyp.empty() || ref.empty()) return 0.0;
  const auto aligned = align_positions(hyp, ref);
  double nkt;
  if (aligned.size() >= 2) {
    nkt = (kendall_tau(aligned) + 1.0) / 2.0;
  } else if (aligned.size() == 1 && hyp.size() == 1 && ref.size() == 1) {
    nkt = 1.0;
  } else {
    return 0.0;
  }
  const double precision = static_cast<double>(aligned.size()) / static_cast<double>(hyp.size());
  const double bp = std::min(
      1.0, std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(hyp.size())));
  return nkt * std::pow(precision, alpha) * std::pow(bp, beta);
}

double ribes(const TokenizedCorpus& hyps, const TokenizedCorpus& refs, double alpha,
             double beta) {
  check_corpora(hyps, refs);
  double sum = 0.0;
  for (std::size_t s = 0; s < hyps.sentences.size(); ++s)
    sum += sentence_ribes(hyps.sentences[s], refs.sentences[s], alpha, beta);
  return sum / static_cast<double>(hyps.sentences.size());
}

TermRecallResult term_recall(const std::vector<std::string>& src_lines,
                             const std::vector<std::string>& hyp_lines,
                             const TermTrie& trie, const Glossary& glossary) {
  if (src_lines.size() != hyp_lines.size())
    throw LengthMismatch(src_lines.size(), hyp_lines.size());
  TermRecallResult r;
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    for (const auto& entry : select_entries(trie, glossary, src_lines[i])) {
      ++r.matched_terms;
      for (const auto& alt : entry.target_alternatives) {
        if (hyp_lines[i].find(alt) != std::string::npos) {
          ++r.satisfied_terms;
          break;
        }
      }
    }
  }
  if (r.matched_terms == 0) {
    r.vacuous = true;
    r.recall = 1.0;
  } else {
    r.recall = static_cast<double>(r.satisfied_terms) / static_cast<double>(r.matched_terms);
  }
  return r;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j{{"label", label},
                           {"bleu", bleu},
                           {"ribes", ribes},
                           {"n_sentences", n_sentences},
                           {"tokenizer_mode", tokenizer_mode_name(tokenizer_mode)}};
  if (term_recall) {
    j["term_recall"] = *term_recall;
    j["term_recall_vacuous"] = term_recall_vacuous;
  }
  if (sentence_ribes) j["sentence_ribes"] = *sentence_ribes;
  return j.dump(2) + "\n";
}

EvalReport EvalReport::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid report JSON: ") + e.what(), 0);
  }
  EvalReport r;
  r.label = j.value("label", "");
  r.bleu = j.at("bleu").get<double>();
  r.ribes = j.at("ribes").get<double>();
  r.n_sentences = j.at("n_sentences").get<std::size_t>();
  r.tokenizer_mode = tokenizer_mode_from_name(j.value("tokenizer_mode", "char"));
  if (j.contains("term_recall")) {
    r.term_recall = j.at("term_recall").get<double>();
    r.term_recall_vacuous = j.value("term_recall_vacuous", false);
  }
  if (j.contains("sentence_ribes"))
    r.sentence_ribes = j.at("sentence_ribes").get<std::vector<double>>();
  return r;
}

RunComparison compare_runs(const EvalReport& a, const EvalReport& b) {
  if (a.n_sentences != b.n_sentences)
    throw CorpusMismatch("reports cover different corpus sizes: " +
                         std::to_string(a.n_sentences) + " vs " +
                         std::to_string(b.n_sentences));
  if (a.tokenizer_mode != b.tokenizer_mode)
    throw CorpusMismatch("reports use different tokenizer modes");
  RunComparison c;
  c.a = a;
  c.b = b;
  c.bleu_delta = a.bleu - b.bleu;
  c.ribes_delta = a.ribes - b.ribes;
  if (a.term_recall && b.term_recall) c.term_recall_delta = *a.term_recall - *b.term_recall;
  return c;
}

namespace {

std::string fmt(double v, int prec) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(prec);
  ss << v;
  return ss.str();
}

std::string fmt_signed(double v, int prec) {
  return (v >= 0 ? "+" : "") + fmt(v, prec);
}

}  // namespace

std::string RunComparison::to_text() const {
  auto label_of = [](const EvalReport& r, const char* fallback) {
    return r.label.empty() ? std::string(fallback) : r.label;
  };
  const std::string la = label_of(a, "run A");
  const std::string lb = label_of(b, "run B");
  std::size_t w = std::max({la.size(), lb.size(), std::size_t(5)});
  auto pad = [&](const std::string& s) {
    return s + std::string(w - std::min(w, s.size()), ' ');
  };
  std::ostringstream out;
  out << "| " << pad("Team") << " | BLEU   | RIBES    | TermRecall |\n";
  auto row = [&](const std::string& name, double bl, double ri,
                 const std::optional<double>& tr, bool delta) {
    out << "| " << pad(name) << " | " << (delta ? fmt_signed(bl, 2) : fmt(bl, 2)) << "  | "
        << (delta ? fmt_signed(ri, 6) : fmt(ri, 6)) << " | "
        << (tr ? (delta ? fmt_signed(*tr, 4) : fmt(*tr, 4)) : std::string("-")) << " |\n";
  };
  row(la, a.bleu, a.ribes, a.term_recall, false);
  row(lb, b.bleu, b.ribes, b.term_recall, false);
  row("delta", bleu_delta, ribes_delta, term_recall_delta, true);
  return out.str();
}

std::string RunComparison::to_json() const {
  nlohmann::ordered_json j{
      {"a", nlohmann::ordered_json::parse(a.to_json())},
      {"b", nlohmann::ordered_json::parse(b.to_json())},
      {"deltas",
       {{"bleu", bleu_delta}, {"ribes", ribes_delta}}},
  };
  if (term_recall_delta) j["deltas"]["term_recall"] = *term_recall_delta;
  return j.dump(2) + "\n";
}

}  // namespace termweaver
