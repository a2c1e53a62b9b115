#include "termweaver/glossary.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "termweaver/errors.hpp"
#include "termweaver/unicode.hpp"

namespace termweaver {

namespace {

void check_term_text(const std::string& s, const char* what) {
  if (s.empty()) throw ValidationError(std::string(what) + " is empty");
  if (s.find('\t') != std::string::npos || s.find('\n') != std::string::npos ||
      s.find('\r') != std::string::npos)
    throw ValidationError(std::string(what) + " contains tab or newline: " + s);
  if (unicode::trim(s) != s)
    throw ValidationError(std::string(what) + " has leading/trailing whitespace: '" + s + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

TermEntry TermEntry::make(std::string source, std::vector<std::string> alternatives) {
  check_term_text(source, "source term");
  if (alternatives.empty())
    throw ValidationError("entry '" + source + "' has no alternatives");
  std::vector<std::string> deduped;
  std::unordered_set<std::string> seen;
  for (auto& alt : alternatives) {
    check_term_text(alt, "alternative");
    if (seen.insert(alt).second) deduped.push_back(std::move(alt));
  }
  return TermEntry{std::move(source), std::move(deduped)};
}

TermEntry parse_display_line(const std::string& line) {
  auto sep = line.find(" : ");
  if (sep == std::string::npos)
    throw ValidationError("MissingSeparator: no ' : ' in '" + line + "'");
  std::string source = unicode::trim(line.substr(0, sep));
  if (source.empty()) throw ValidationError("EmptySource in '" + line + "'");
  std::string rhs = line.substr(sep + 3);
  std::vector<std::string> alts;
  std::size_t start = 0;
  while (true) {
    auto bar = rhs.find('|', start);
    std::string piece = unicode::trim(
        rhs.substr(start, bar == std::string::npos ? std::string::npos : bar - start));
    if (!piece.empty()) alts.push_back(std::move(piece));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  if (alts.empty()) throw ValidationError("EmptyAlternatives in '" + line + "'");
  return TermEntry::make(std::move(source), std::move(alts));
}

std::string render_display_line(const TermEntry& entry) {
  std::string out = entry.source_term + " : ";
  for (std::size_t i = 0; i < entry.target_alternatives.size(); ++i) {
    if (i) out += " | ";
    out += entry.target_alternatives[i];
  }
  return out;
}

void Glossary::add(TermEntry entry, bool merge_duplicates) {
  auto it = index_.find(entry.source_term);
  if (it == index_.end()) {
    index_.emplace(entry.source_term, entries_.size());
    entries_.push_back(std::move(entry));
    return;
  }
  if (!merge_duplicates) throw DuplicateSourceError(entry.source_term);
  auto& existing = entries_[it->second].target_alternatives;
  std::unordered_set<std::string> seen(existing.begin(), existing.end());
  for (auto& alt : entry.target_alternatives) {
    if (seen.insert(alt).second) existing.push_back(std::move(alt));
  }
}

const TermEntry* Glossary::find(const std::string& source_term) const {
  auto it = index_.find(source_term);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

Glossary parse_glossary_tsv(const std::string& content, bool merge_duplicates) {
  Glossary g;
  std::size_t line_no = 0;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos
                                                                 : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 2) throw FormatError("TSV line needs source + alternative", line_no);
    try {
      std::string source = unicode::trim(cols[0]);
      std::vector<std::string> alts;
      for (std::size_t i = 1; i < cols.size(); ++i) {
        std::string a = unicode::trim(cols[i]);
        if (!a.empty()) alts.push_back(std::move(a));
      }
      g.add(TermEntry::make(std::move(source), std::move(alts)), merge_duplicates);
    } catch (const DuplicateSourceError&) {
      throw;
    } catch (const ValidationError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return g;
}

Glossary parse_glossary_json(const std::string& content, bool merge_duplicates) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what(), 0);
  }
  if (!doc.is_array()) throw FormatError("glossary JSON must be an array", 0);
  Glossary g;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("source") || !item.contains("alternatives"))
      throw FormatError("glossary JSON entries need {source, alternatives}", 0);
    std::vector<std::string> alts;
    for (const auto& a : item.at("alternatives")) alts.push_back(a.get<std::string>());
    g.add(TermEntry::make(item.at("source").get<std::string>(), std::move(alts)),
          merge_duplicates);
  }
  return g;
}

std::string serialize_glossary_tsv(const Glossary& g) {
  std::string out;
  for (const auto& e : g.entries()) {
    out += e.source_term;
    for (const auto& alt : e.target_alternatives) {
      out += '\t';
      out += alt;
    }
    out += '\n';
  }
  return out;
}

std::string serialize_glossary_json(const Glossary& g) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : g.entries()) {
    arr.push_back({{"source", e.source_term}, {"alternatives", e.target_alternatives}});
  }
  return arr.dump(2) + "\n";
}

Glossary load_glossary(const std::string& path, GlossaryFormat format,
                       bool merge_duplicates) {
  const std::string content = read_file(path);
  return format == GlossaryFormat::tsv ? parse_glossary_tsv(content, merge_duplicates)
                                       : parse_glossary_json(content, merge_duplicates);
}

void save_glossary(const Glossary& g, const std::string& path, GlossaryFormat format) {
  write_file(path, format == GlossaryFormat::tsv ? serialize_glossary_tsv(g)
                                                 : serialize_glossary_json(g));
}

Glossary merge(const Glossary& base, const Glossary& incoming) {
  Glossary out;
  for (const auto& e : base.entries()) out.add(e);
  for (const auto& e : incoming.entries()) out.add(e, /*merge_duplicates=*/true);
  return out;
}

Glossary nfkc_normalized(const Glossary& g) {
  Glossary out;
  for (const auto& e : g.entries()) {
    std::vector<std::string> alts;
    for (const auto& a : e.target_alternatives)
      alts.push_back(unicode::trim(unicode::nfkc(a)));
    out.add(TermEntry::make(unicode::trim(unicode::nfkc(e.source_term)), std::move(alts)),
            /*merge_duplicates=*/true);
  }
  return out;
}

}  // namespace termweaver
