#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sape/corpus.hpp"
#include "sape/edit_aligner.hpp"
#include "sape/stat_aligner.hpp"

namespace sape {

struct TableEntry {
  std::vector<std::string> mt;  // non-empty token sequence
  std::vector<std::string> pe;
  std::string origin;  // surface | stem | pos | bigram-pos | meteor | statistical
};

inline bool table_entry_less(const TableEntry& a, const TableEntry& b) {
  return a.mt != b.mt ? a.mt < b.mt : a.pe < b.pe;
}
inline bool table_entry_same(const TableEntry& a, const TableEntry& b) {
  return a.mt == b.mt && a.pe == b.pe;
}

// Phrase-pair table, sorted by (mt, pe) and unique on the pair; the origin
// label of the first occurrence wins on union.
struct AlignmentTable {
  std::vector<TableEntry> entries;

  void add(TableEntry entry);
  std::size_t size() const { return entries.size(); }
  bool contains(const std::vector<std::string>& mt,
                const std::vector<std::string>& pe) const;
};

// "mt tokens ||| pe tokens" per line.
void save_alignment_table(const std::string& path, const AlignmentTable& table);
AlignmentTable load_alignment_table(const std::string& path);

// Every monolingual-aligner link is kept; a statistical link joins only
// when both of its endpoints are untouched by the former. Statistical links
// may be many-to-one among themselves.
Alignment combine_link_level(const Alignment& meteor, const Alignment& stat);

AlignmentTable union_tables(const std::vector<AlignmentTable>& tables);

// Aligns the tag-bigram sequences of the two sentences and replaces each
// linked bigram by its surface forms: link (i, j) emits the token pairs
// (mt[i..i+1], pe[j..j+1]).
AlignmentTable bigram_pos_pairs(const TaggedSentence& mt, const TaggedSentence& pe,
                                const SynonymLexicon& lexicon,
                                const AlignerOptions& opts = {});

struct HybridOptions {
  int em_iterations = 5;
  AlignerOptions aligner;
};

struct TrainingViews {
  AlignmentTable table;                 // union over all views
  std::vector<Alignment> pair_links;    // per corpus entry, surface positions
  std::vector<std::pair<Sentence, Sentence>> bigram_segments;  // extra parallel data
  std::vector<Alignment> segment_links;
  TranslationTable forward;             // mt -> pe, lowercased
  TranslationTable reverse;             // pe -> mt, lowercased
};

// Aligns each (mt, pe) pair in four views (surface, stem, tag, tag-bigram),
// combining the monolingual alignment of each view with one shared
// EM-trained statistical alignment, and unions the resulting tables. The
// surface pairs of linked tag bigrams are appended to the statistical
// aligner's training data and returned as extra parallel segments.
TrainingViews build_training_views(const TripletCorpus& corpus, const Tagger& tagger,
                                   const SynonymLexicon& lexicon,
                                   const HybridOptions& opts = {});

}  // namespace sape
