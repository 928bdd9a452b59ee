#pragma once

#include <string>
#include <vector>

#include "sape/corpus.hpp"
#include "sape/edit_aligner.hpp"

namespace sape {

// Sufficient statistics for corpus-level BLEU (orders 1..4).
struct BleuStats {
  long long match[4] = {0, 0, 0, 0};
  long long total[4] = {0, 0, 0, 0};
  long long hyp_len = 0;
  long long ref_len = 0;

  BleuStats& operator+=(const BleuStats& o);
  BleuStats& operator-=(const BleuStats& o);
};

BleuStats bleu_sentence_stats(const Sentence& hyp, const Sentence& ref);

// Geometric mean of clipped n-gram precisions times the brevity penalty,
// scaled to 0..100. Orders with no hypothesis n-grams are skipped; a zero
// match count at any populated order gives 0.
double bleu_from_stats(const BleuStats& stats);

double bleu(const std::vector<Sentence>& hyps, const std::vector<Sentence>& refs);

// Minimum insertions + deletions + substitutions + block shifts (unit cost
// each) turning hyp into ref, divided by the reference length. Shifted
// blocks must match the reference exactly somewhere; the shift search is
// the usual greedy best-gain loop.
double ter(const Sentence& hyp, const Sentence& ref);
long long ter_edits(const Sentence& hyp, const Sentence& ref);

struct MeteorStats {
  long long matches = 0;
  long long hyp_len = 0;
  long long ref_len = 0;
  long long chunks = 0;

  MeteorStats& operator+=(const MeteorStats& o);
};

MeteorStats meteor_sentence_stats(const Sentence& hyp, const Sentence& ref,
                                  const SynonymLexicon& lexicon);

// 100 * F_mean * (1 - 0.5 (chunks/matches)^3) with F_mean = 10PR/(R+9P);
// zero matches give 0.
double meteor_from_stats(const MeteorStats& stats);

double meteor_score(const Sentence& hyp, const Sentence& ref,
                    const SynonymLexicon& lexicon);

struct EvalReport {
  double bleu = 0.0;    // 0..100
  double meteor = 0.0;  // 0..100
  double ter = 0.0;     // percent, >= 0
  struct PerSentence {
    double ter = 0.0;
    double meteor = 0.0;
  };
  std::vector<PerSentence> per_sentence;
};

EvalReport evaluate_corpus(const std::vector<Sentence>& hyps,
                           const std::vector<Sentence>& refs,
                           const SynonymLexicon& lexicon,
                           bool with_per_sentence = false);

EvalReport evaluate_files(const std::string& hyp_path, const std::string& ref_path,
                          const SynonymLexicon& lexicon);

// "BLEU=xx.xx METEOR=xx.xx TER=xx.xx"
std::string format_report(const EvalReport& report);

}  // namespace sape
