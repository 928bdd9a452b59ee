#include "sape/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace sape {

BleuStats& BleuStats::operator+=(const BleuStats& o) {
  for (int n = 0; n < 4; ++n) {
    match[n] += o.match[n];
    total[n] += o.total[n];
  }
  hyp_len += o.hyp_len;
  ref_len += o.ref_len;
  return *this;
}

BleuStats& BleuStats::operator-=(const BleuStats& o) {
  for (int n = 0; n < 4; ++n) {
    match[n] -= o.match[n];
    total[n] -= o.total[n];
  }
  hyp_len -= o.hyp_len;
  ref_len -= o.ref_len;
  return *this;
}

namespace {

std::map<std::string, long long> ngram_counts(const Sentence& s, int n) {
  std::map<std::string, long long> counts;
  if (static_cast<int>(s.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i)
    counts[join({s.begin() + i, s.begin() + i + n})] += 1;
  return counts;
}

}  // namespace

BleuStats bleu_sentence_stats(const Sentence& hyp, const Sentence& ref) {
  BleuStats stats;
  stats.hyp_len = static_cast<long long>(hyp.size());
  stats.ref_len = static_cast<long long>(ref.size());
  for (int n = 1; n <= 4; ++n) {
    auto hyp_counts = ngram_counts(hyp, n);
    auto ref_counts = ngram_counts(ref, n);
    for (const auto& [gram, c] : hyp_counts) {
      stats.total[n - 1] += c;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) stats.match[n - 1] += std::min(c, it->second);
    }
  }
  return stats;
}

double bleu_from_stats(const BleuStats& stats) {
  if (stats.hyp_len == 0) return 0.0;
  double log_precision = 0.0;
  for (int n = 0; n < 4; ++n) {
    if (stats.total[n] == 0) continue;  // shorter than n on the whole corpus
    if (stats.match[n] == 0) return 0.0;
    log_precision += 0.25 * std::log(static_cast<double>(stats.match[n]) /
                                     static_cast<double>(stats.total[n]));
  }
  double bp = stats.hyp_len >= stats.ref_len
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(stats.ref_len) /
                                       static_cast<double>(stats.hyp_len));
  return 100.0 * bp * std::exp(log_precision);
}

double bleu(const std::vector<Sentence>& hyps, const std::vector<Sentence>& refs) {
  if (hyps.size() != refs.size())
    throw data_error("bleu: hypothesis and reference counts differ (" +
                     std::to_string(hyps.size()) + " vs " +
                     std::to_string(refs.size()) + ")");
  BleuStats stats;
  for (std::size_t k = 0; k < hyps.size(); ++k)
    stats += bleu_sentence_stats(hyps[k], refs[k]);
  return bleu_from_stats(stats);
}

// ---------------------------------------------------------------------------
// translation edit rate

namespace {

long long levenshtein(const Sentence& a, const Sentence& b) {
  std::vector<long long> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<long long>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<long long>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      long long sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Blocks that occur verbatim in the reference, by length then content.
bool block_in_ref(const Sentence& block, const Sentence& ref) {
  if (block.size() > ref.size()) return false;
  for (std::size_t p = 0; p + block.size() <= ref.size(); ++p) {
    bool same = true;
    for (std::size_t k = 0; k < block.size(); ++k)
      if (ref[p + k] != block[k]) {
        same = false;
        break;
      }
    if (same) return true;
  }
  return false;
}

Sentence apply_shift(const Sentence& hyp, std::size_t i, std::size_t len,
                     std::size_t dest) {
  Sentence rest;
  rest.reserve(hyp.size());
  for (std::size_t k = 0; k < hyp.size(); ++k)
    if (k < i || k >= i + len) rest.push_back(hyp[k]);
  Sentence out(rest.begin(), rest.begin() + dest);
  out.insert(out.end(), hyp.begin() + i, hyp.begin() + i + len);
  out.insert(out.end(), rest.begin() + dest, rest.end());
  return out;
}

}  // namespace

long long ter_edits(const Sentence& hyp, const Sentence& ref) {
  if (ref.empty()) throw data_error("ter: empty reference");
  Sentence cur = hyp;
  long long shifts = 0;
  long long dist = levenshtein(cur, ref);
  while (dist > 0) {
    long long best_gain = 0;
    Sentence best;
    for (std::size_t len = 1; len <= cur.size(); ++len) {
      for (std::size_t i = 0; i + len <= cur.size(); ++i) {
        Sentence block(cur.begin() + i, cur.begin() + i + len);
        if (!block_in_ref(block, ref)) continue;
        for (std::size_t dest = 0; dest + len <= cur.size(); ++dest) {
          if (dest == i) continue;
          Sentence shifted = apply_shift(cur, i, len, dest);
          long long gain = dist - levenshtein(shifted, ref);
          if (gain > best_gain ||
              (gain == best_gain && gain > 0 && join(shifted) < join(best))) {
            best_gain = gain;
            best = std::move(shifted);
          }
        }
      }
    }
    if (best_gain < 1) break;  // each applied shift strictly lowers the distance
    cur = std::move(best);
    shifts += 1;
    dist = levenshtein(cur, ref);
  }
  return shifts + dist;
}

double ter(const Sentence& hyp, const Sentence& ref) {
  return static_cast<double>(ter_edits(hyp, ref)) / static_cast<double>(ref.size());
}

// ---------------------------------------------------------------------------
// meteor

MeteorStats& MeteorStats::operator+=(const MeteorStats& o) {
  matches += o.matches;
  hyp_len += o.hyp_len;
  ref_len += o.ref_len;
  chunks += o.chunks;
  return *this;
}

MeteorStats meteor_sentence_stats(const Sentence& hyp, const Sentence& ref,
                                  const SynonymLexicon& lexicon) {
  MeteorStats stats;
  stats.hyp_len = static_cast<long long>(hyp.size());
  stats.ref_len = static_cast<long long>(ref.size());
  Alignment a = align(hyp, ref, lexicon);
  stats.matches = static_cast<long long>(a.size());
  // chunks: maximal runs contiguous and monotone on both sides
  for (std::size_t k = 0; k < a.links.size(); ++k) {
    if (k == 0 || a.links[k].i != a.links[k - 1].i + 1 ||
        a.links[k].j != a.links[k - 1].j + 1)
      stats.chunks += 1;
  }
  return stats;
}

double meteor_from_stats(const MeteorStats& stats) {
  if (stats.matches == 0) return 0.0;
  double m = static_cast<double>(stats.matches);
  double precision = m / static_cast<double>(stats.hyp_len);
  double recall = m / static_cast<double>(stats.ref_len);
  double f_mean = 10.0 * precision * recall / (recall + 9.0 * precision);
  double frag = static_cast<double>(stats.chunks) / m;
  double penalty = 0.5 * frag * frag * frag;
  return 100.0 * f_mean * (1.0 - penalty);
}

double meteor_score(const Sentence& hyp, const Sentence& ref,
                    const SynonymLexicon& lexicon) {
  return meteor_from_stats(meteor_sentence_stats(hyp, ref, lexicon));
}

// ---------------------------------------------------------------------------

EvalReport evaluate_corpus(const std::vector<Sentence>& hyps,
                           const std::vector<Sentence>& refs,
                           const SynonymLexicon& lexicon, bool with_per_sentence) {
  if (hyps.size() != refs.size())
    throw data_error("evaluate: hypothesis and reference counts differ");
  EvalReport report;
  report.bleu = bleu(hyps, refs);

  long long edits = 0, ref_total = 0;
  MeteorStats meteor_total;
  for (std::size_t k = 0; k < hyps.size(); ++k) {
    long long e = ter_edits(hyps[k], refs[k]);
    edits += e;
    ref_total += static_cast<long long>(refs[k].size());
    auto ms = meteor_sentence_stats(hyps[k], refs[k], lexicon);
    meteor_total += ms;
    if (with_per_sentence)
      report.per_sentence.push_back(
          {static_cast<double>(e) / static_cast<double>(refs[k].size()),
           meteor_from_stats(ms)});
  }
  report.ter = 100.0 * static_cast<double>(edits) / static_cast<double>(ref_total);
  report.meteor = meteor_from_stats(meteor_total);
  return report;
}

EvalReport evaluate_files(const std::string& hyp_path, const std::string& ref_path,
                          const SynonymLexicon& lexicon) {
  auto hyps = load_sentences(hyp_path);
  auto refs = load_sentences(ref_path);
  if (hyps.size() != refs.size())
    throw data_error("evaluate: " + hyp_path + " has " + std::to_string(hyps.size()) +
                     " lines, " + ref_path + " has " + std::to_string(refs.size()));
  return evaluate_corpus(hyps, refs, lexicon);
}

std::string format_report(const EvalReport& report) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "BLEU=%.2f METEOR=%.2f TER=%.2f", report.bleu,
                report.meteor, report.ter);
  return buf;
}

}  // namespace sape
