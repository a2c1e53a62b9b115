#include "termweaver/corpus.hpp"

#include <fstream>
#include <random>

#include "json.hpp"
#include "termweaver/errors.hpp"

namespace termweaver {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

void check_pair(const SentencePair& p, std::size_t line_no) {
  if (p.src.empty() || p.tgt.empty())
    throw FormatError("sentence pair needs non-empty src and tgt", line_no);
}

}  // namespace

std::vector<SentencePair> load_pairs_tsv(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<SentencePair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError("pair TSV line needs src \\t tgt", line_no);
    SentencePair p{"", line.substr(0, tab), line.substr(tab + 1)};
    // A third column, when present, is an id.
    auto tab2 = p.tgt.find('\t');
    if (tab2 != std::string::npos) {
      p.id = p.tgt.substr(tab2 + 1);
      p.tgt.resize(tab2);
    }
    check_pair(p, line_no);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SentencePair> load_pairs_jsonl(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<SentencePair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    SentencePair p;
    if (obj.contains("id")) p.id = obj.at("id").get<std::string>();
    p.src = obj.value("src", "");
    p.tgt = obj.value("tgt", "");
    check_pair(p, line_no);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SentencePair> load_pairs(const std::string& path) {
  if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl")
    return load_pairs_jsonl(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return load_pairs_jsonl(path);
  return load_pairs_tsv(path);
}

std::vector<std::string> load_lines(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::vector<SentencePair> sample_subset(const std::vector<SentencePair>& pairs,
                                        std::size_t n, std::uint64_t seed) {
  if (n >= pairs.size()) return pairs;
  // Partial Fisher-Yates; mt19937_64 keeps the sequence identical across
  // platforms, unlike std::shuffle/std::sample.
  std::vector<std::size_t> idx(pairs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  std::vector<SentencePair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
    std::swap(idx[i], idx[j]);
    out.push_back(pairs[idx[i]]);
  }
  return out;
}

}  // namespace termweaver
