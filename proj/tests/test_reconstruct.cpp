#include "termweaver/reconstruct.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "termweaver/errors.hpp"

using namespace termweaver;

namespace {

Glossary fig3_glossary() {
  Glossary g;
  g.add(TermEntry::make("セレノール化合物", {"셀레놀 화합물"}));
  g.add(TermEntry::make("端部", {"끝부분", "단부", "모서리"}));
  g.add(TermEntry::make("絶縁膜", {"절연막"}));
  g.add(TermEntry::make("送信回路", {"송신 회로", "전송 회로"}));
  return g;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("render_glossary_block: lines round-trip through parse_display_line") {
  auto g = fig3_glossary();
  auto block = render_glossary_block(g.entries());
  REQUIRE(block.front() == '{');
  REQUIRE(block.back() == '}');
  std::istringstream lines(block.substr(1, block.size() - 2));
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == ',') line.pop_back();
    CHECK(parse_display_line(line) == g.at(i));
    ++i;
  }
  CHECK(i == 4);
}

TEST_CASE("render_glossary_block empty") {
  CHECK(render_glossary_block({}) == "{}");
}

TEST_CASE("build_translation_prompt embeds the glossary block once") {
  auto g = fig3_glossary();
  auto messages = build_translation_prompt("この絶縁膜は", g.entries(),
                                           default_translation_template());
  REQUIRE(messages.size() == 2);
  CHECK(messages[0].role == Role::system);
  CHECK(messages[0].content.find("絶縁膜 : 절연막") != std::string::npos);
  CHECK(messages[1].content == "この絶縁膜は");

  const std::string block = render_glossary_block(g.entries());
  std::size_t count = 0, pos = 0;
  while ((pos = messages[0].content.find(block, pos)) != std::string::npos) {
    ++count;
    pos += block.size();
  }
  CHECK(count == 1);
}

TEST_CASE("empty entry list still renders a Glossary section") {
  auto messages =
      build_translation_prompt("text", {}, default_translation_template());
  CHECK(messages[0].content.find("Glossary:\n{}") != std::string::npos);
}

TEST_CASE("entry cap truncates by first occurrence") {
  std::vector<TermEntry> entries;
  for (int i = 0; i < 60; ++i)
    entries.push_back(TermEntry::make("term" + std::to_string(i), {"alt"}));
  auto messages =
      build_translation_prompt("src", entries, default_translation_template(), 50);
  CHECK(messages[0].content.find("term49 :") != std::string::npos);
  CHECK(messages[0].content.find("term50 :") == std::string::npos);
}

TEST_CASE("translation prompt template validation") {
  PromptTemplate no_glossary{"system", "{{source}}"};
  CHECK_THROWS_AS(build_translation_prompt("x", {}, no_glossary), TemplateError);
  PromptTemplate no_source{"system {{glossary}}", "plain"};
  CHECK_THROWS_AS(build_translation_prompt("x", {}, no_source), TemplateError);
}

TEST_CASE("build_instruction_example wires scan results into the prompt") {
  auto g = Glossary{};
  g.add(TermEntry::make("特許権", {"특허권"}));
  g.add(TermEntry::make("技術標準化", {"기술 표준화"}));
  TermTrie trie(g);
  SentencePair pair{"", "各種の特許権や技術標準化に関する問題が検討された。",
                    "각종 특허권과 기술 표준화에 관한 문제가 검토되었다。"};
  auto ex = build_instruction_example(pair, trie, g, default_translation_template());
  REQUIRE(ex.messages.size() == 3);
  REQUIRE(ex.matched_entries.size() == 2);
  CHECK(ex.matched_entries[0].source_term == "特許権");
  CHECK(ex.messages[0].content.find("特許権 : 특허권") != std::string::npos);
  CHECK(ex.messages[0].content.find("技術標準化 : 기술 표준화") != std::string::npos);
  CHECK(ex.messages[2].content == pair.tgt);
}

TEST_CASE("no matches yields the empty block") {
  Glossary g;
  g.add(TermEntry::make("無関係", {"무관"}));
  TermTrie trie(g);
  SentencePair pair{"", "マッチするものはない", "매치 없음"};
  auto ex = build_instruction_example(pair, trie, g, default_translation_template());
  CHECK(ex.matched_entries.empty());
  CHECK(ex.messages[0].content.find("Glossary:\n{}") != std::string::npos);
}

TEST_CASE("assistant content is single-line") {
  Glossary g;
  TermTrie trie(g);
  SentencePair trailing{"", "src", "타겟 문장\n"};
  auto ex = build_instruction_example(trailing, trie, g, default_translation_template());
  CHECK(ex.messages[2].content == "타겟 문장");

  SentencePair internal{"", "src", "줄1\n줄2\r\n줄3"};
  auto ex2 = build_instruction_example(internal, trie, g, default_translation_template());
  CHECK(ex2.messages[2].content == "줄1 줄2 줄3");
  CHECK(ex2.messages[2].content.find('\n') == std::string::npos);
}

TEST_CASE("emit_training_jsonl: counts, determinism, consistency") {
  auto g = fig3_glossary();
  TermTrie trie(g);
  std::vector<SentencePair> pairs;
  for (int i = 0; i < 10; ++i)
    pairs.push_back({std::to_string(i), "絶縁膜の端部" + std::to_string(i),
                     "절연막의 끝부분 " + std::to_string(i)});

  const std::string p1 = "test_recon_1.jsonl", p2 = "test_recon_2.jsonl";
  CHECK(emit_training_jsonl(pairs, trie, g, default_translation_template(), p1, 1000, 7) ==
        10);
  emit_training_jsonl(pairs, trie, g, default_translation_template(), p2, 1000, 7);
  CHECK(read_file(p1) == read_file(p2));

  // sampled emission is deterministic per seed
  std::vector<SentencePair> many;
  for (int i = 0; i < 500; ++i)
    many.push_back({std::to_string(i), "文" + std::to_string(i), "문장 " + std::to_string(i)});
  emit_training_jsonl(many, trie, g, default_translation_template(), p1, 100, 3);
  emit_training_jsonl(many, trie, g, default_translation_template(), p2, 100, 3);
  CHECK(read_file(p1) == read_file(p2));
  emit_training_jsonl(many, trie, g, default_translation_template(), p2, 100, 4);
  CHECK(read_file(p1) != read_file(p2));

  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("every emitted record's block matches select_entries of its source") {
  auto g = fig3_glossary();
  TermTrie trie(g);
  std::vector<SentencePair> pairs;
  for (int i = 0; i < 100; ++i) {
    std::string src = "文書" + std::to_string(i);
    if (i % 2) src += "絶縁膜";
    if (i % 3 == 0) src += "の端部と送信回路";
    pairs.push_back({std::to_string(i), src, "타겟 " + std::to_string(i)});
  }
  const std::string path = "test_recon_consistency.jsonl";
  emit_training_jsonl(pairs, trie, g, default_translation_template(), path, 1000, 0);

  std::ifstream in(path);
  std::string line;
  std::size_t i = 0;
  while (std::getline(in, line)) {
    auto record = nlohmann::json::parse(line);
    auto messages = messages_from_json(record.at("messages"));
    REQUIRE(messages.size() == 3);
    const auto expected = select_entries(trie, g, pairs[i].src);
    const std::string block = render_glossary_block(expected);
    CHECK(messages[0].content.find(block) != std::string::npos);
    CHECK(messages[2].content.find('\n') == std::string::npos);
    // each block term occurs in the user (source) text
    for (const auto& e : expected)
      CHECK(messages[1].content.find(e.source_term) != std::string::npos);
    ++i;
  }
  CHECK(i == 100);
  std::remove(path.c_str());
}

TEST_CASE("run manifest records the fine-tuning settings") {
  auto manifest = nlohmann::json::parse(render_run_manifest(10, 1000, 42, 50));
  CHECK(manifest.at("epochs") == 3);
  CHECK(manifest.at("temperature").get<double>() == doctest::Approx(0.1));
  CHECK(manifest.at("seed") == 42);
}
