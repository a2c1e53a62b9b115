#include "termweaver/prompt_template.hpp"

#include <fstream>
#include <sstream>

#include "termweaver/errors.hpp"

namespace termweaver {

namespace {

const char* kExtractionSystem =
    "I will now show you source sentences in Japanese and target sentences in "
    "Korean. Your task is to extract and pair key terms from both the original "
    "and translation texts. Maintain the exact form of the terms without "
    "modification.\n"
    "\n"
    "Please follow these instructions for extracting term pairs:\n"
    "\n"
    "- Extract term pairs that are closely related to patents.\n"
    "- Only extract nouns.\n"
    "- The extracted term pairs will be used to create a Japanese-Korean "
    "glossary.\n"
    "- Return the results in the form of a Python dictionary, as shown in the "
    "example.\n"
    "- However, if the exact same term appears more than once include it only "
    "once.\n"
    "\n"
    "Example 1:\n"
    "\n"
    "src_sentence = それぞれについて官能評価を行った結果を表４２に示す。\n"
    "\n"
    "tgt_sentence = 각각에 대하여 관능 평가를 행한 결과를 표 42에 나타낸다。\n"
    "\n"
    "result = {\"官能評価\": \"관능 평가\"}\n"
    "\n"
    "Example 2:\n"
    "\n"
    "src_sentence = 各種の特許権や技術標準化に関する問題が検討された。\n"
    "\n"
    "tgt_sentence = 각종 특허권과 기술 표준화에 관한 문제가 검토되었다。\n"
    "\n"
    "result = {\"特許権\": \"특허권\", \"技術標準化\": \"기술 표준화\"}";

const char* kExtractionUser =
    "src_sentence = {{src_sentence}}\n"
    "\n"
    "tgt_sentence = {{tgt_sentence}}";

const char* kTranslationSystem =
    "You are a professional translator. You are especially familiar with "
    "specialized patent knowledge and terms in chemistry, electricity, "
    "mechanical engineering, and physics, as well as general everyday terms. "
    "Translate the following Japanese source text into Korean.\n"
    "\n"
    "- Refer to the word pairs in the glossary when you translate.\n"
    "- Do not translate the glossary itself.\n"
    "- Do not include anything but translation result only.\n"
    "- If a term in the glossary has multiple possible translations separated "
    "by '|', choose the most appropriate one.\n"
    "- The translation result must be written in a single line. There must be "
    "no newline character at the end.\n"
    "\n"
    "Glossary:\n"
    "{{glossary}}";

const char* kTranslationUser = "{{source}}";

std::string strip_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

PromptTemplate default_extraction_template() {
  return PromptTemplate{kExtractionSystem, kExtractionUser};
}

PromptTemplate default_translation_template() {
  return PromptTemplate{kTranslationSystem, kTranslationUser};
}

PromptTemplate load_template(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open template " + path);
  PromptTemplate t;
  std::string* section = nullptr;
  std::string line;
  std::string system_text, user_text;
  bool saw_system = false, saw_user = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "[system]") {
      section = &system_text;
      saw_system = true;
      continue;
    }
    if (line == "[user]") {
      section = &user_text;
      saw_user = true;
      continue;
    }
    if (!section) {
      if (line.empty()) continue;
      throw TemplateError("template content before [system]/[user] header in " + path);
    }
    *section += line;
    *section += '\n';
  }
  if (!saw_system || !saw_user)
    throw TemplateError("template " + path + " needs [system] and [user] sections");
  t.system_text = strip_trailing_newlines(system_text);
  t.user_text = strip_trailing_newlines(user_text);
  if (t.system_text.empty())
    throw TemplateError("template " + path + " has empty [system] section");
  return t;
}

std::string render_slots(const std::string& text,
                         const std::map<std::string, std::string>& values) {
  std::string out = text;
  for (const auto& [key, value] : values) {
    const std::string token = "{{" + key + "}}";
    std::size_t pos = 0;
    while ((pos = out.find(token, pos)) != std::string::npos) {
      out.replace(pos, token.size(), value);
      pos += value.size();
    }
  }
  return out;
}

std::size_t count_slot(const std::string& text, const std::string& name) {
  const std::string token = "{{" + name + "}}";
  std::size_t count = 0, pos = 0;
  while ((pos = text.find(token, pos)) != std::string::npos) {
    ++count;
    pos += token.size();
  }
  return count;
}

void require_slot(const PromptTemplate& t, const std::string& name) {
  if (count_slot(t.system_text, name) + count_slot(t.user_text, name) == 0)
    throw TemplateError("template missing {{" + name + "}} slot");
}

}  // namespace termweaver
