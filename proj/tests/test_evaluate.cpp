#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "sape/evaluate.hpp"

using namespace sape;

namespace {

long long lev(const Sentence& a, const Sentence& b) {
  std::vector<long long> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<long long>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<long long>(i);
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool block_in(const Sentence& block, const Sentence& ref) {
  for (std::size_t p = 0; p + block.size() <= ref.size(); ++p) {
    bool same = true;
    for (std::size_t k = 0; k < block.size(); ++k)
      if (ref[p + k] != block[k]) { same = false; break; }
    if (same) return true;
  }
  return block.size() <= ref.size() ? false : false;
}

// Exhaustive minimum of shifts + edit distance via uniform-cost search over
// all shift sequences (states are reorderings of the hypothesis).
long long oracle_ter_edits(const Sentence& hyp, const Sentence& ref) {
  std::map<std::string, long long> dist_to;  // shift count to reach state
  std::priority_queue<std::pair<long long, Sentence>,
                      std::vector<std::pair<long long, Sentence>>,
                      std::greater<>> frontier;
  frontier.push({0, hyp});
  dist_to[join(hyp)] = 0;
  long long best = lev(hyp, ref);
  while (!frontier.empty()) {
    auto [shifts, cur] = frontier.top();
    frontier.pop();
    auto it = dist_to.find(join(cur));
    if (it != dist_to.end() && it->second < shifts) continue;
    best = std::min(best, shifts + lev(cur, ref));
    if (shifts + 1 >= best) continue;  // further shifts cannot improve
    for (std::size_t len = 1; len <= cur.size(); ++len) {
      for (std::size_t i = 0; i + len <= cur.size(); ++i) {
        Sentence block(cur.begin() + i, cur.begin() + i + len);
        if (!block_in(block, ref)) continue;
        Sentence rest;
        for (std::size_t k = 0; k < cur.size(); ++k)
          if (k < i || k >= i + len) rest.push_back(cur[k]);
        for (std::size_t dest = 0; dest + len <= cur.size(); ++dest) {
          if (dest == i) continue;
          Sentence shifted(rest.begin(), rest.begin() + dest);
          shifted.insert(shifted.end(), block.begin(), block.end());
          shifted.insert(shifted.end(), rest.begin() + dest, rest.end());
          std::string key = join(shifted);
          auto dit = dist_to.find(key);
          if (dit == dist_to.end() || dit->second > shifts + 1) {
            dist_to[key] = shifts + 1;
            frontier.push({shifts + 1, shifted});
          }
        }
      }
    }
  }
  return best;
}

Sentence random_sentence(std::mt19937_64& rng, int max_len, int vocab) {
  int len = 1 + static_cast<int>(rng_below(rng, max_len));
  Sentence s;
  for (int k = 0; k < len; ++k)
    s.push_back(std::string(1, static_cast<char>('a' + rng_below(rng, vocab))));
  return s;
}

}  // namespace

TEST_CASE("bleu worked examples") {
  SUBCASE("perfect match") {
    std::vector<Sentence> refs = {{"a", "b", "c", "d"}, {"e", "f", "g", "h"}};
    CHECK(bleu(refs, refs) == doctest::Approx(100.0));
  }
  SUBCASE("zero four-gram precision zeroes the score") {
    CHECK(bleu({{"a", "b", "c", "d"}}, {{"a", "b", "c", "e"}}) ==
          doctest::Approx(0.0));
  }
  SUBCASE("brevity penalty on a half-length hypothesis") {
    // unigrams and bigrams match fully; orders 3,4 have no hypothesis
    // n-grams at length 2, so BLEU = 100 * exp(1 - 4/2)
    double got = bleu({{"a", "b"}}, {{"a", "b", "c", "d"}});
    CHECK(got == doctest::Approx(100.0 * std::exp(-1.0)).epsilon(1e-9));
  }
  SUBCASE("length mismatch is an error") {
    CHECK_THROWS_AS(bleu({{"a"}}, {}), data_error);
  }
}

TEST_CASE("bleu has clipped counts") {
  // "a a" against "a": the second hypothesis unigram does not match
  BleuStats stats = bleu_sentence_stats({"a", "a"}, {"a", "b"});
  CHECK(stats.match[0] == 1);
  CHECK(stats.total[0] == 2);
}

TEST_CASE("bleu is invariant to corpus line order") {
  std::mt19937_64 rng(5);
  std::vector<Sentence> hyps, refs;
  for (int k = 0; k < 12; ++k) {
    hyps.push_back(random_sentence(rng, 8, 4));
    refs.push_back(random_sentence(rng, 8, 4));
  }
  double base = bleu(hyps, refs);
  std::vector<std::size_t> perm(hyps.size());
  for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Sentence> hyps2, refs2;
  for (auto k : perm) {
    hyps2.push_back(hyps[k]);
    refs2.push_back(refs[k]);
  }
  CHECK(bleu(hyps2, refs2) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("ter worked examples") {
  CHECK(ter({"a", "b"}, {"a", "b"}) == doctest::Approx(0.0));
  CHECK(ter({"a", "x", "c", "d", "e"}, {"a", "b", "c", "d", "e"}) ==
        doctest::Approx(0.2));
  CHECK(ter({"c", "d", "a", "b"}, {"a", "b", "c", "d"}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(ter({"a"}, {}), data_error);
}

TEST_CASE("greedy ter equals exhaustive search on short pairs") {
  std::mt19937_64 rng(42);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Sentence hyp = random_sentence(rng, 7, 4);
    Sentence ref = random_sentence(rng, 7, 4);
    long long greedy = ter_edits(hyp, ref);
    long long exact = oracle_ter_edits(hyp, ref);
    CHECK(greedy >= exact);  // greedy can never beat the optimum
    if (greedy != exact) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("meteor worked examples") {
  SynonymLexicon lex;
  SUBCASE("single-token identity scores fifty") {
    CHECK(meteor_score({"a"}, {"a"}, lex) == doctest::Approx(50.0));
  }
  SUBCASE("identity approaches one hundred with length") {
    double prev = 0.0;
    for (int n = 1; n <= 8; ++n) {
      Sentence s;
      for (int k = 0; k < n; ++k) s.push_back("w" + std::to_string(k));
      double score = meteor_score(s, s, lex);
      double expected = 100.0 * (1.0 - 0.5 / (static_cast<double>(n) *
                                              static_cast<double>(n) *
                                              static_cast<double>(n)));
      CHECK(score == doctest::Approx(expected).epsilon(1e-9));
      CHECK(score >= prev);
      prev = score;
    }
  }
  SUBCASE("no common tokens scores zero") {
    CHECK(meteor_score({"a", "b"}, {"c", "d"}, lex) == doctest::Approx(0.0));
  }
  SUBCASE("full swap halves the score through the fragmentation penalty") {
    CHECK(meteor_score({"a", "b"}, {"b", "a"}, lex) == doctest::Approx(50.0));
  }
  SUBCASE("synonyms count as matches") {
    SynonymLexicon syn;
    syn.add_group({"toad", "sapo"});
    CHECK(meteor_score({"toad"}, {"sapo"}, syn) == doctest::Approx(50.0));
  }
}

TEST_CASE("meteor drops when a token is replaced") {
  SynonymLexicon lex;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + static_cast<int>(rng_below(rng, 5));
    Sentence s;
    for (int k = 0; k < n; ++k) s.push_back("w" + std::to_string(k));
    Sentence damaged = s;
    damaged[rng_below(rng, n)] = "zzz";
    CHECK(meteor_score(s, s, lex) > meteor_score(damaged, s, lex));
  }
}

TEST_CASE("corpus ter equals length-weighted mean of sentence ters") {
  std::mt19937_64 rng(11);
  SynonymLexicon lex;
  std::vector<Sentence> hyps, refs;
  for (int k = 0; k < 20; ++k) {
    hyps.push_back(random_sentence(rng, 7, 4));
    refs.push_back(random_sentence(rng, 7, 4));
  }
  auto report = evaluate_corpus(hyps, refs, lex, true);
  double weighted = 0.0;
  long long total_ref = 0;
  for (std::size_t k = 0; k < refs.size(); ++k) {
    weighted += report.per_sentence[k].ter * static_cast<double>(refs[k].size());
    total_ref += static_cast<long long>(refs[k].size());
  }
  CHECK(report.ter ==
        doctest::Approx(100.0 * weighted / static_cast<double>(total_ref))
            .epsilon(1e-9));
}

TEST_CASE("report formatting and identical-file behavior") {
  SynonymLexicon lex;
  std::vector<Sentence> sents = {{"el", "gato", "duerme", "."},
                                 {"la", "casa", "es", "azul", "."}};
  auto report = evaluate_corpus(sents, sents, lex);
  CHECK(report.bleu == doctest::Approx(100.0));
  CHECK(report.ter == doctest::Approx(0.0));
  CHECK(report.meteor > 99.0);
  auto line = format_report(report);
  CHECK(line.rfind("BLEU=100.00 METEOR=", 0) == 0);
  CHECK(line.find("TER=0.00") != std::string::npos);
}
