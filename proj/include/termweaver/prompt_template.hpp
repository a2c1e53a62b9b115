#pragma once

#include <map>
#include <string>

namespace termweaver {

// A system/user prompt pair with {{slot}} placeholders. Template files hold
// the two sections under "[system]" and "[user]" header lines; the built-in
// defaults cover the ja->ko patent setup and are overridable per language pair.
struct PromptTemplate {
  std::string system_text;
  std::string user_text;
};

// Term-extraction template: user layout carries {{src_sentence}} and
// {{tgt_sentence}} slots.
PromptTemplate default_extraction_template();

// Translation template: system text carries a {{glossary}} slot, user layout
// a {{source}} slot.
PromptTemplate default_translation_template();

PromptTemplate load_template(const std::string& path);

// Replace every {{key}} occurrence. Unknown slots are left intact.
std::string render_slots(const std::string& text,
                         const std::map<std::string, std::string>& values);

std::size_t count_slot(const std::string& text, const std::string& name);

// Throws TemplateError unless the slot appears at least once.
void require_slot(const PromptTemplate& t, const std::string& name);

}  // namespace termweaver
