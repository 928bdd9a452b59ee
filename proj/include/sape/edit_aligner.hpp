#pragma once

#include <string>
#include <vector>

#include "sape/corpus.hpp"

namespace sape {

enum class MatchStage { exact, stem, synonym, none };

// A positional link between two token sequences. For the monolingual
// aligner i indexes the hypothesis and j the reference; for the statistical
// aligner i indexes the source and j the target.
struct Link {
  int i = 0;
  int j = 0;
  MatchStage stage = MatchStage::none;
};

inline bool operator<(const Link& a, const Link& b) {
  return a.i != b.i ? a.i < b.i : a.j < b.j;
}
inline bool operator==(const Link& a, const Link& b) { return a.i == b.i && a.j == b.j; }

// A set of links, kept sorted by (i, j) and unique on (i, j).
struct Alignment {
  std::vector<Link> links;

  void add(Link link);
  bool has(int i, int j) const;
  bool covers_i(int i) const;
  bool covers_j(int j) const;
  std::size_t size() const { return links.size(); }
  bool operator==(const Alignment& o) const { return links == o.links; }
};

// "i-j" pairs, space-separated ("0-0 1-1 4-5").
std::string to_pharaoh(const Alignment& a);
Alignment from_pharaoh(const std::string& line);

// Groups of mutually substitutable surface forms; membership is symmetric.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;

  // One group per line, members space-separated.
  static SynonymLexicon from_file(const std::string& path);

  void add_group(const std::vector<std::string>& members);
  bool synonyms(const std::string& a, const std::string& b) const;
  bool empty() const { return groups_of_.empty(); }

 private:
  std::map<std::string, std::vector<int>> groups_of_;
  int next_group_ = 0;
};

std::string porter_stem(const std::string& word);

// All (i, j) over uncovered positions whose tokens match under the stage
// predicate. The synonym stage yields nothing on an empty lexicon.
std::vector<Link> stage_match(const Sentence& hyp, const Sentence& ref, MatchStage stage,
                              const SynonymLexicon& lexicon,
                              const std::vector<bool>& covered_h,
                              const std::vector<bool>& covered_r);

// Unordered link pairs whose relative order inverts between the two sides.
int count_crossings(const std::vector<Link>& links);
int count_crossings(const Alignment& a);

struct AlignerOptions {
  // Exact branch-and-bound matching up to this sentence length; greedy
  // left-to-right above it. The search also degrades to greedy if it
  // exceeds an internal node budget on pathological candidate sets.
  int exact_matching_max_len = 20;
};

// Among maximum-cardinality matchings over `candidates`, the one with the
// fewest crossings counted against candidates plus `fixed`; ties resolved
// to the lexicographically smallest link list.
std::vector<Link> select_stage_links(const std::vector<Link>& candidates,
                                     const std::vector<Link>& fixed, bool exact);

// Staged matching exact -> stem -> synonym with per-stage crossing
// minimization; the result is the union of the per-stage selections and is
// a matching (at most one link per position on either side).
Alignment align(const Sentence& hyp, const Sentence& ref, const SynonymLexicon& lexicon,
                const AlignerOptions& opts = {});

}  // namespace sape
