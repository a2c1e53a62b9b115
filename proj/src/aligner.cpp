#include "termweaver/aligner.hpp"

#include <exception>
#include <fstream>
#include <unordered_set>

#include "termweaver/errors.hpp"
#include "termweaver/unicode.hpp"

namespace termweaver {

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::SrcNotFound: return "SrcNotFound";
    case RejectReason::TgtNotFound: return "TgtNotFound";
    case RejectReason::WholeSentence: return "WholeSentence";
    case RejectReason::DuplicateKey: return "DuplicateKey";
  }
  return "?";
}

std::vector<ChatMessage> build_extraction_prompt(const SentencePair& pair,
                                                 const PromptTemplate& tmpl) {
  if (tmpl.system_text.empty()) throw TemplateError("extraction template has empty system text");
  require_slot(tmpl, "src_sentence");
  require_slot(tmpl, "tgt_sentence");
  const std::map<std::string, std::string> slots = {{"src_sentence", pair.src},
                                                    {"tgt_sentence", pair.tgt}};
  return {{Role::system, render_slots(tmpl.system_text, slots)},
          {Role::user, render_slots(tmpl.user_text, slots)}};
}

namespace {

void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r'))
    ++i;
}

std::string parse_quoted(const std::string& s, std::size_t& i) {
  if (i >= s.size() || (s[i] != '"' && s[i] != '\''))
    throw MalformedPair("expected quoted string", i);
  const char quote = s[i++];
  std::string out;
  while (i < s.size() && s[i] != quote) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      char c = s[i + 1];
      switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: out += c; break;
      }
      i += 2;
    } else {
      out += s[i++];
    }
  }
  if (i >= s.size()) throw MalformedPair("unterminated string", i);
  ++i;  // closing quote
  return out;
}

}  // namespace

namespace {

ExtractionResult parse_mapping_at(const std::string& text, std::size_t start) {
  ExtractionResult result;
  std::unordered_set<std::string> seen;
  std::size_t i = start + 1;
  skip_ws(text, i);
  if (i < text.size() && text[i] == '}') return result;
  while (true) {
    skip_ws(text, i);
    std::string key = parse_quoted(text, i);
    skip_ws(text, i);
    if (i >= text.size() || text[i] != ':') throw MalformedPair("expected ':'", i);
    ++i;
    skip_ws(text, i);
    std::string value = parse_quoted(text, i);
    if (key.empty() || value.empty()) throw MalformedPair("empty term", i);
    if (seen.insert(key).second) result.pairs.emplace_back(std::move(key), std::move(value));
    skip_ws(text, i);
    if (i >= text.size()) throw MalformedPair("unterminated mapping", i);
    if (text[i] == '}') break;
    if (text[i] != ',') throw MalformedPair("expected ',' or '}'", i);
    ++i;
    skip_ws(text, i);
    if (i < text.size() && text[i] == '}') break;  // trailing comma
  }
  return result;
}

}  // namespace

ExtractionResult parse_extraction_response(const std::string& text, bool strict) {
  if (strict) {
    const std::string trimmed = unicode::trim(text);
    if (trimmed.empty() || trimmed.front() != '{' || trimmed.back() != '}')
      throw NoMappingFound();
    return parse_mapping_at(trimmed, 0);
  }
  // Earliest { that opens a well-formed mapping wins; prose braces are
  // skipped over.
  std::size_t start = text.find('{');
  if (start == std::string::npos) throw NoMappingFound();
  std::exception_ptr first_error;
  while (start != std::string::npos) {
    try {
      return parse_mapping_at(text, start);
    } catch (const MalformedPair&) {
      if (!first_error) first_error = std::current_exception();
    }
    start = text.find('{', start + 1);
  }
  std::rethrow_exception(first_error);
}

ValidationOutcome validate_extraction(const SentencePair& pair,
                                      const ExtractionResult& result,
                                      const ValidationPolicy& policy) {
  ValidationOutcome out;
  std::unordered_set<std::string> accepted_keys;
  const double src_len = static_cast<double>(unicode::scalar_length(pair.src));
  for (const auto& p : result.pairs) {
    const auto& [src_term, tgt_term] = p;
    if (accepted_keys.count(src_term)) {
      out.rejections.push_back({p, RejectReason::DuplicateKey});
    } else if (pair.src.find(src_term) == std::string::npos) {
      out.rejections.push_back({p, RejectReason::SrcNotFound});
    } else if (pair.tgt.find(tgt_term) == std::string::npos) {
      out.rejections.push_back({p, RejectReason::TgtNotFound});
    } else if (static_cast<double>(unicode::scalar_length(src_term)) >
               policy.max_fraction * src_len) {
      out.rejections.push_back({p, RejectReason::WholeSentence});
    } else {
      accepted_keys.insert(src_term);
      out.accepted.pairs.push_back(p);
    }
  }
  return out;
}

std::string render_mapping_literal(const ExtractionResult& result) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : result.pairs) {
    if (!first) out += ", ";
    first = false;
    auto quote = [](const std::string& s) {
      std::string q = "\"";
      for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        q += c;
      }
      return q + "\"";
    };
    out += quote(k) + ": " + quote(v);
  }
  return out + "}";
}

std::size_t emit_aligner_dataset(const std::vector<SentencePair>& pairs,
                                 const std::vector<ExtractionResult>& results,
                                 const PromptTemplate& tmpl, const std::string& path) {
  if (pairs.size() != results.size()) throw LengthMismatch(pairs.size(), results.size());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto messages = build_extraction_prompt(pairs[i], tmpl);
    messages.push_back({Role::assistant, render_mapping_literal(results[i])});
    nlohmann::ordered_json record{{"messages", messages_to_json(messages)}};
    out << record.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
  return pairs.size();
}

}  // namespace termweaver
