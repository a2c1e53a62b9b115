#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace termweaver {

// One parallel sentence pair.
struct SentencePair {
  std::string id;  // optional; empty when the input carries none
  std::string src;
  std::string tgt;

  bool operator==(const SentencePair&) const = default;
};

// TSV: src \t tgt per line. JSONL: {"src":..., "tgt":..., "id"?:...} per line.
std::vector<SentencePair> load_pairs_tsv(const std::string& path);
std::vector<SentencePair> load_pairs_jsonl(const std::string& path);
// Dispatch on extension: .jsonl/.json -> JSONL, otherwise TSV.
std::vector<SentencePair> load_pairs(const std::string& path);

// Plain text, one sentence per line (UTF-8, \n line ends; final newline optional).
std::vector<std::string> load_lines(const std::string& path);

// min(n, |pairs|) elements chosen uniformly without replacement; identical
// output for identical (pairs, n, seed). n >= |pairs| returns the input
// order unchanged.
std::vector<SentencePair> sample_subset(const std::vector<SentencePair>& pairs,
                                        std::size_t n, std::uint64_t seed);

}  // namespace termweaver
