#include "sape/hybrid_align.hpp"

#include <algorithm>

namespace sape {

void AlignmentTable::add(TableEntry entry) {
  auto it = std::lower_bound(entries.begin(), entries.end(), entry, table_entry_less);
  if (it != entries.end() && table_entry_same(*it, entry)) return;
  entries.insert(it, std::move(entry));
}

bool AlignmentTable::contains(const std::vector<std::string>& mt,
                              const std::vector<std::string>& pe) const {
  TableEntry probe{mt, pe, ""};
  auto it = std::lower_bound(entries.begin(), entries.end(), probe, table_entry_less);
  return it != entries.end() && table_entry_same(*it, probe);
}

void save_alignment_table(const std::string& path, const AlignmentTable& table) {
  std::vector<std::string> lines;
  lines.reserve(table.entries.size());
  for (const auto& e : table.entries)
    lines.push_back(join(e.mt) + " ||| " + join(e.pe));
  write_lines(path, lines);
}

AlignmentTable load_alignment_table(const std::string& path) {
  AlignmentTable table;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_on(line, " ||| ");
    if (fields.size() != 2)
      throw data_error(path + " line " + std::to_string(lineno) +
                       ": expected 'mt ||| pe'");
    table.add({split_ws(fields[0]), split_ws(fields[1]), ""});
  }
  return table;
}

Alignment combine_link_level(const Alignment& meteor, const Alignment& stat) {
  Alignment out = meteor;
  for (const auto& l : stat.links) {
    if (meteor.covers_i(l.i) || meteor.covers_j(l.j)) continue;
    out.add({l.i, l.j, MatchStage::none});
  }
  return out;
}

AlignmentTable union_tables(const std::vector<AlignmentTable>& tables) {
  AlignmentTable out;
  for (const auto& t : tables)
    for (const auto& e : t.entries) out.add(e);
  return out;
}

AlignmentTable bigram_pos_pairs(const TaggedSentence& mt, const TaggedSentence& pe,
                                const SynonymLexicon& lexicon,
                                const AlignerOptions& opts) {
  AlignmentTable table;
  auto mt_bigrams = to_bigrams(mt);
  auto pe_bigrams = to_bigrams(pe);
  if (mt_bigrams.empty() || pe_bigrams.empty()) return table;
  auto a = align(mt_bigrams, pe_bigrams, lexicon, opts);
  for (const auto& l : a.links) {
    table.add({{mt.tokens[l.i], mt.tokens[l.i + 1]},
               {pe.tokens[l.j], pe.tokens[l.j + 1]},
               "bigram-pos"});
  }
  return table;
}

namespace {

struct ViewSpec {
  std::string origin;
  Sentence mt;
  Sentence pe;
};

// Per-pair hybrid alignment: per view, the monolingual alignment combined
// with the shared statistical links; links unioned across views and entries
// emitted with the original surface forms.
void hybrid_align_pair(const Sentence& mt, const Sentence& pe,
                       const TaggedSentence& mt_tagged, const TaggedSentence& pe_tagged,
                       const Alignment& stat_links, const SynonymLexicon& lexicon,
                       const AlignerOptions& opts, Alignment* links_out,
                       AlignmentTable* table_out) {
  std::vector<ViewSpec> views;
  views.push_back({"surface", lowercase(mt), lowercase(pe)});
  ViewSpec stem{"stem", {}, {}};
  for (const auto& t : mt) stem.mt.push_back(porter_stem(lowercase_token(t)));
  for (const auto& t : pe) stem.pe.push_back(porter_stem(lowercase_token(t)));
  views.push_back(std::move(stem));
  views.push_back({"pos", mt_tagged.tags, pe_tagged.tags});

  for (const auto& view : views) {
    Alignment meteor = align(view.mt, view.pe, lexicon, opts);
    Alignment combined = combine_link_level(meteor, stat_links);
    for (const auto& l : combined.links) {
      links_out->add(l);
      if (table_out) {
        const char* origin =
            l.stage == MatchStage::none ? "statistical" : view.origin.c_str();
        table_out->add({{mt[l.i]}, {pe[l.j]}, origin});
      }
    }
  }
}

}  // namespace

TrainingViews build_training_views(const TripletCorpus& corpus, const Tagger& tagger,
                                   const SynonymLexicon& lexicon,
                                   const HybridOptions& opts) {
  TrainingViews out;
  if (corpus.empty()) return out;

  std::vector<TaggedSentence> mt_tagged, pe_tagged;
  mt_tagged.reserve(corpus.size());
  pe_tagged.reserve(corpus.size());
  for (const auto& entry : corpus) {
    mt_tagged.push_back(pos_tag(entry.mt, tagger));
    pe_tagged.push_back(pos_tag(entry.pe, tagger));
  }

  // Tag-bigram surface pairs first: they extend the statistical training data.
  std::vector<AlignmentTable> bigram_tables;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    auto table = bigram_pos_pairs(mt_tagged[k], pe_tagged[k], lexicon, opts.aligner);
    for (const auto& e : table.entries) out.bigram_segments.push_back({e.mt, e.pe});
    bigram_tables.push_back(std::move(table));
  }

  std::vector<std::pair<Sentence, Sentence>> em_corpus, em_corpus_rev;
  for (const auto& entry : corpus) {
    em_corpus.push_back({lowercase(entry.mt), lowercase(entry.pe)});
    em_corpus_rev.push_back({lowercase(entry.pe), lowercase(entry.mt)});
  }
  for (const auto& [smt, spe] : out.bigram_segments) {
    em_corpus.push_back({lowercase(smt), lowercase(spe)});
    em_corpus_rev.push_back({lowercase(spe), lowercase(smt)});
  }
  out.forward = train_em(em_corpus, opts.em_iterations);
  out.reverse = train_em(em_corpus_rev, opts.em_iterations);

  auto stat_align_pair = [&](const Sentence& mt_lc, const Sentence& pe_lc) {
    auto fwd = viterbi_align(out.forward, mt_lc, pe_lc);
    auto rev = flip(viterbi_align(out.reverse, pe_lc, mt_lc));
    return gdfa(fwd, rev);
  };

  std::vector<AlignmentTable> view_tables;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const auto& mt = corpus[k].mt;
    const auto& pe = corpus[k].pe;
    Alignment stat = stat_align_pair(lowercase(mt), lowercase(pe));
    Alignment links;
    AlignmentTable table;
    hybrid_align_pair(mt, pe, mt_tagged[k], pe_tagged[k], stat, lexicon, opts.aligner,
                      &links, &table);
    out.pair_links.push_back(std::move(links));
    view_tables.push_back(std::move(table));
  }

  for (const auto& [smt, spe] : out.bigram_segments) {
    Alignment stat = stat_align_pair(lowercase(smt), lowercase(spe));
    Alignment links;
    hybrid_align_pair(smt, spe, pos_tag(smt, tagger), pos_tag(spe, tagger), stat,
                      lexicon, opts.aligner, &links, nullptr);
    out.segment_links.push_back(std::move(links));
  }

  for (const auto& t : bigram_tables) view_tables.push_back(t);
  out.table = union_tables(view_tables);
  return out;
}

}  // namespace sape
