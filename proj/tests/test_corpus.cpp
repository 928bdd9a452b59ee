#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sape/corpus.hpp"

using namespace sape;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("sape_corpus_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("tokenize splits whitespace and detaches punctuation") {
  CHECK(tokenize("CommanderX : Toad su gilipollas .") ==
        Sentence{"CommanderX", ":", "Toad", "su", "gilipollas", "."});
  CHECK(tokenize("") == Sentence{});
  CHECK(tokenize("hola, mundo.") == Sentence{"hola", ",", "mundo", "."});
  CHECK(tokenize("¿qué?") == Sentence{"¿", "qué", "?"});
  CHECK(tokenize("(word).") == Sentence{"(", "word", ")", "."});
  CHECK(tokenize("...") == Sentence{".", ".", "."});
}

TEST_CASE("tokenize is a fixpoint on its own output") {
  const char* lines[] = {"hola, mundo.", "¿Dónde está? (aquí)", "a.b.c...",
                         "x", "\"cita\" y: fin;"};
  for (const char* line : lines) {
    Sentence once = tokenize(line);
    Sentence twice = tokenize(join(once));
    CHECK(once == twice);
  }
}

TEST_CASE("lowercase handles ASCII and Latin ranges and is idempotent") {
  CHECK(lowercase({"Toad"}) == Sentence{"toad"});
  CHECK(lowercase({"CommanderX", ":"}) == Sentence{"commanderx", ":"});
  CHECK(lowercase({"Ñandú"}) == Sentence{"ñandú"});
  Sentence s = {"ÁÉÍÓÚ", "Ü", "MiXeD", "123"};
  CHECK(lowercase(lowercase(s)) == lowercase(s));
}

TEST_CASE("pos_tag uses the lexicon and falls back to rules") {
  LexiconTagger tagger;
  tagger.add("su", "PPO");
  tagger.add("eres", "VSfin");
  tagger.add("un", "ART");
  Sentence s = {"CommanderX", ":", "Toad", "su", "gilipollas", "."};
  auto tagged = pos_tag(s, tagger);
  CHECK(tagged.tags ==
        std::vector<std::string>{"NC", "COLON", "NC", "PPO", "NC", "FS"});

  CHECK(pos_tag({}, tagger).tags.empty());
  CHECK(pos_tag({"zzxqy"}, tagger).tags == std::vector<std::string>{"NC"});
  CHECK(pos_tag({"42"}, tagger).tags == std::vector<std::string>{"CARD"});
}

TEST_CASE("lexicon tagger prefers the most frequent tag") {
  LexiconTagger tagger;
  tagger.add("vino", "NC");
  tagger.add("vino", "VLfin");
  tagger.add("vino", "VLfin");
  CHECK(tagger.tag("vino") == "VLfin");
}

TEST_CASE("to_bigrams") {
  TaggedSentence mt;
  mt.tags = {"NC", "COLON", "NC", "PPO", "NC", "FS"};
  mt.tokens.resize(6);
  CHECK(to_bigrams(mt) == std::vector<std::string>{"NC-COLON", "COLON-NC", "NC-PPO",
                                                   "PPO-NC", "NC-FS"});
  TaggedSentence pe;
  pe.tags = {"NC", "COLON", "NC", "VSfin", "ART", "NC", "FS"};
  pe.tokens.resize(7);
  CHECK(to_bigrams(pe) == std::vector<std::string>{"NC-COLON", "COLON-NC", "NC-VSfin",
                                                   "VSfin-ART", "ART-NC", "NC-FS"});
  TaggedSentence single;
  single.tags = {"NC"};
  single.tokens.resize(1);
  CHECK(to_bigrams(single).empty());

  for (std::size_t n = 0; n < 12; ++n) {
    TaggedSentence t;
    t.tags.assign(n, "NC");
    t.tokens.resize(n);
    CHECK(to_bigrams(t).size() == (n == 0 ? 0 : n - 1));
  }
}

TEST_CASE("load_triplets pairs lines and rejects mismatched counts") {
  TempDir dir;
  write_lines(dir.file("src"), {"a b", "c", "d e f"});
  write_lines(dir.file("mt"), {"1", "2", "3"});
  write_lines(dir.file("pe"), {"x", "y", "z"});
  auto corpus = load_triplets(dir.file("src"), dir.file("mt"), dir.file("pe"));
  REQUIRE(corpus.size() == 3);
  CHECK(corpus[0].source == Sentence{"a", "b"});
  CHECK(corpus[2].pe == Sentence{"z"});

  write_lines(dir.file("mt2"), {"1", "2"});
  CHECK_THROWS_WITH_AS(load_triplets(dir.file("src"), dir.file("mt2"), dir.file("pe")),
                       doctest::Contains("mt2"), data_error);
}

TEST_CASE("load_triplets ignores a trailing newline but not an empty final line") {
  TempDir dir;
  write_file(dir.file("a"), "x\ny\n");
  write_file(dir.file("b"), "x\ny");
  write_file(dir.file("c"), "x\ny\n");
  auto corpus = load_triplets(dir.file("a"), dir.file("b"), dir.file("c"));
  CHECK(corpus.size() == 2);
}

TEST_CASE("load_sentences reports malformed UTF-8 with line number") {
  TempDir dir;
  std::string bad = "ok line\n\xC3(broken\n";
  write_file(dir.file("bad"), bad);
  CHECK_THROWS_WITH_AS(load_sentences(dir.file("bad")), doctest::Contains("line 2"),
                       data_error);
}

TEST_CASE("sentence file round-trip preserves order") {
  TempDir dir;
  std::vector<Sentence> sents = {{"a", "b"}, {}, {"único", "."}};
  save_sentences(dir.file("s"), sents);
  CHECK(load_sentences(dir.file("s")) == sents);
}

TEST_CASE("tagged file round-trip") {
  TempDir dir;
  std::vector<TaggedSentence> sents(2);
  sents[0].tokens = {"CommanderX", ":"};
  sents[0].tags = {"NC", "COLON"};
  sents[1].tokens = {"fin"};
  sents[1].tags = {"NC"};
  save_tagged(dir.file("t"), sents);
  auto back = load_tagged(dir.file("t"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].tokens == sents[0].tokens);
  CHECK(back[0].tags == sents[0].tags);
  CHECK(back[1].tags == sents[1].tags);
}

TEST_CASE("tagger lexicon file loading") {
  TempDir dir;
  write_file(dir.file("lex"), "su\tPPO\neres\tVSfin\n");
  auto tagger = LexiconTagger::from_file(dir.file("lex"));
  CHECK(tagger.tag("su") == "PPO");
  CHECK(tagger.tag("eres") == "VSfin");
  CHECK(tagger.tag("otro") == "NC");
}
