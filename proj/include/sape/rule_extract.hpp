#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sape/corpus.hpp"
#include "sape/edit_aligner.hpp"
#include "sape/stat_aligner.hpp"

namespace sape {

// Inclusive token spans on both sides of an alignment-consistent pair.
struct PhrasePair {
  int mt_begin = 0, mt_end = 0;  // inclusive
  int pe_begin = 0, pe_end = 0;
  std::vector<std::string> mt_tokens;
  std::vector<std::string> pe_tokens;
  int64_t count = 1;
};

inline bool operator<(const PhrasePair& a, const PhrasePair& b) {
  if (a.mt_begin != b.mt_begin) return a.mt_begin < b.mt_begin;
  if (a.mt_end != b.mt_end) return a.mt_end < b.mt_end;
  if (a.pe_begin != b.pe_begin) return a.pe_begin < b.pe_begin;
  return a.pe_end < b.pe_end;
}
inline bool operator==(const PhrasePair& a, const PhrasePair& b) {
  return a.mt_begin == b.mt_begin && a.mt_end == b.mt_end &&
         a.pe_begin == b.pe_begin && a.pe_end == b.pe_end;
}

struct RuleSymbol {
  bool is_nt = false;
  std::string token;  // terminal surface form when !is_nt
  int nt_index = 0;   // 1 or 2, numbered by source-side order

  bool operator==(const RuleSymbol& o) const = default;
  auto operator<=>(const RuleSymbol& o) const = default;
};

inline RuleSymbol term(std::string token) { return {false, std::move(token), 0}; }
inline RuleSymbol nonterm(int index) { return {true, "", index}; }

// Log-space rule features; the phrase penalty is the constant e^-1.
struct FeatureVector {
  double log_p_mt_given_pe = 0.0;   // log P(mt side | pe side)
  double log_p_pe_given_mt = 0.0;
  double log_lex_mt_given_pe = 0.0;
  double log_lex_pe_given_mt = 0.0;
  double log_phrase_penalty = -1.0;
};

struct SCFGRule {
  std::vector<RuleSymbol> src;  // mt side; at most 2 non-adjacent nonterminals
  std::vector<RuleSymbol> tgt;  // pe side; same nonterminals, co-indexed
  std::vector<Link> links;      // terminal links over symbol positions
  FeatureVector features;

  int nonterminal_count() const;
  std::string src_string() const;
  std::string tgt_string() const;
  std::string key() const;  // "src ||| tgt"
};

std::string render_symbols(const std::vector<RuleSymbol>& symbols);
std::vector<RuleSymbol> parse_symbols(const std::string& text);

struct ExtractOptions {
  int max_phrase_len = 7;    // both sides of an initial pair
  int max_src_symbols = 5;   // terminals plus nonterminals on the mt side
  int min_count = 1;
  bool good_turing = true;
};

// All alignment-consistent span pairs with at least one internal link and
// both spans within max_len, including extensions over unaligned boundary
// words on the pe side.
std::vector<PhrasePair> extract_phrases(const Sentence& mt, const Sentence& pe,
                                        const Alignment& a, int max_len);

// Subtracting one or two non-overlapping sub-pairs from each pair yields
// rules with co-indexed nonterminals, under the usual constraints: at most
// two nonterminals, none adjacent on the mt side, at least one mt terminal,
// at most max_src_symbols mt symbols. Zero-subtraction pairs become flat
// rules.
std::vector<SCFGRule> induce_hier_rules(const std::vector<PhrasePair>& phrases,
                                        const Sentence& mt, const Sentence& pe,
                                        const Alignment& a, const ExtractOptions& opts);

// Occurrence counts plus the most frequent internal link pattern per rule.
class RuleCounts {
 public:
  void add(const SCFGRule& rule);
  int64_t total_types() const { return static_cast<int64_t>(counts_.size()); }

  struct Entry {
    SCFGRule rule;  // links resolved to the dominant pattern
    int64_t count = 0;
  };
  std::vector<Entry> entries() const;  // sorted by rule key

 private:
  struct Value {
    SCFGRule rule;
    int64_t count = 0;
    std::map<std::string, int64_t> link_patterns;
  };
  std::map<std::string, Value> counts_;
};

struct RuleTable {
  std::vector<SCFGRule> rules;  // sorted by key
};

// Relative-frequency conditionals from (optionally Good-Turing adjusted)
// joint counts over raw marginals, and lexical weights from the word
// tables using the maximum over aligned words with a null fallback.
RuleTable estimate_features(const RuleCounts& counts, const TranslationTable& forward,
                            const TranslationTable& reverse,
                            const ExtractOptions& opts);

// "src ||| tgt ||| logp logp logp logp -1 ||| i-j ..." with nonterminals
// rendered [X,1] and [X,2]; gzip-compressed with a fixed header so the
// bytes are stable across runs.
void save_rule_table(const std::string& path, const RuleTable& table);
RuleTable load_rule_table(const std::string& path);

}  // namespace sape
