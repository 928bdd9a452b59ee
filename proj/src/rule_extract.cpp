#include "sape/rule_extract.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "sape/good_turing.hpp"

namespace sape {

int SCFGRule::nonterminal_count() const {
  int n = 0;
  for (const auto& s : src) n += s.is_nt ? 1 : 0;
  return n;
}

std::string render_symbols(const std::vector<RuleSymbol>& symbols) {
  std::vector<std::string> parts;
  parts.reserve(symbols.size());
  for (const auto& s : symbols)
    parts.push_back(s.is_nt ? "[X," + std::to_string(s.nt_index) + "]" : s.token);
  return join(parts);
}

std::vector<RuleSymbol> parse_symbols(const std::string& text) {
  std::vector<RuleSymbol> out;
  for (const auto& tok : split_ws(text)) {
    if (tok == "[X,1]")
      out.push_back(nonterm(1));
    else if (tok == "[X,2]")
      out.push_back(nonterm(2));
    else
      out.push_back(term(tok));
  }
  return out;
}

std::string SCFGRule::src_string() const { return render_symbols(src); }
std::string SCFGRule::tgt_string() const { return render_symbols(tgt); }
std::string SCFGRule::key() const { return src_string() + " ||| " + tgt_string(); }

std::vector<PhrasePair> extract_phrases(const Sentence& mt, const Sentence& pe,
                                        const Alignment& a, int max_len) {
  const int n = static_cast<int>(mt.size());
  const int m = static_cast<int>(pe.size());
  for (const auto& l : a.links)
    if (l.i < 0 || l.i >= n || l.j < 0 || l.j >= m)
      throw data_error("alignment link " + std::to_string(l.i) + "-" +
                       std::to_string(l.j) + " out of range");

  std::vector<bool> pe_aligned(m, false);
  for (const auto& l : a.links) pe_aligned[l.j] = true;

  std::vector<PhrasePair> pairs;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = i1; i2 < std::min(n, i1 + max_len); ++i2) {
      int j_min = m, j_max = -1;
      for (const auto& l : a.links) {
        if (l.i < i1 || l.i > i2) continue;
        j_min = std::min(j_min, l.j);
        j_max = std::max(j_max, l.j);
      }
      if (j_max < 0) continue;  // needs at least one internal link
      bool consistent = true;
      for (const auto& l : a.links) {
        if (l.j >= j_min && l.j <= j_max && (l.i < i1 || l.i > i2)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      for (int js = j_min; js >= 0 && (js == j_min || !pe_aligned[js]); --js) {
        for (int je = j_max; je < m && (je == j_max || !pe_aligned[je]); ++je) {
          if (je - js + 1 > max_len) continue;
          PhrasePair p;
          p.mt_begin = i1;
          p.mt_end = i2;
          p.pe_begin = js;
          p.pe_end = je;
          p.mt_tokens.assign(mt.begin() + i1, mt.begin() + i2 + 1);
          p.pe_tokens.assign(pe.begin() + js, pe.begin() + je + 1);
          pairs.push_back(std::move(p));
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

namespace {

struct Span {
  int begin, end;  // inclusive
  bool contains(int x) const { return x >= begin && x <= end; }
  bool within(const Span& o) const { return begin >= o.begin && end <= o.end; }
  bool overlaps(const Span& o) const { return begin <= o.end && o.begin <= end; }
  int len() const { return end - begin + 1; }
};

// Builds the rule for a parent phrase with 0–2 subtracted sub-pairs
// (given in mt order); returns false if a constraint fails.
bool build_rule(const PhrasePair& parent, const std::vector<const PhrasePair*>& subs,
                const Sentence& mt, const Sentence& pe, const Alignment& a,
                const ExtractOptions& opts, SCFGRule* out) {
  auto in_sub_mt = [&](int i) {
    for (std::size_t k = 0; k < subs.size(); ++k)
      if (Span{subs[k]->mt_begin, subs[k]->mt_end}.contains(i))
        return static_cast<int>(k);
    return -1;
  };
  auto in_sub_pe = [&](int j) {
    for (std::size_t k = 0; k < subs.size(); ++k)
      if (Span{subs[k]->pe_begin, subs[k]->pe_end}.contains(j))
        return static_cast<int>(k);
    return -1;
  };

  SCFGRule rule;
  std::vector<int> src_pos(mt.size(), -1), tgt_pos(pe.size(), -1);
  int terminals = 0;
  for (int i = parent.mt_begin; i <= parent.mt_end;) {
    int k = in_sub_mt(i);
    if (k >= 0) {
      if (!rule.src.empty() && rule.src.back().is_nt) return false;  // adjacent
      rule.src.push_back(nonterm(k + 1));
      i = subs[k]->mt_end + 1;
    } else {
      src_pos[i] = static_cast<int>(rule.src.size());
      rule.src.push_back(term(mt[i]));
      ++terminals;
      ++i;
    }
  }
  if (terminals == 0) return false;
  if (static_cast<int>(rule.src.size()) > opts.max_src_symbols) return false;

  for (int j = parent.pe_begin; j <= parent.pe_end;) {
    int k = in_sub_pe(j);
    if (k >= 0) {
      rule.tgt.push_back(nonterm(k + 1));
      j = subs[k]->pe_end + 1;
    } else {
      tgt_pos[j] = static_cast<int>(rule.tgt.size());
      rule.tgt.push_back(term(pe[j]));
      ++j;
    }
  }

  for (const auto& l : a.links) {
    if (l.i < parent.mt_begin || l.i > parent.mt_end) continue;
    if (src_pos[l.i] < 0 || tgt_pos[l.j] < 0) continue;  // inside a subtracted pair
    rule.links.push_back({src_pos[l.i], tgt_pos[l.j], MatchStage::none});
  }
  std::sort(rule.links.begin(), rule.links.end());
  *out = std::move(rule);
  return true;
}

}  // namespace

std::vector<SCFGRule> induce_hier_rules(const std::vector<PhrasePair>& phrases,
                                        const Sentence& mt, const Sentence& pe,
                                        const Alignment& a, const ExtractOptions& opts) {
  std::vector<SCFGRule> out;
  for (const auto& parent : phrases) {
    Span pmt{parent.mt_begin, parent.mt_end};
    Span ppe{parent.pe_begin, parent.pe_end};
    if (pmt.len() > opts.max_phrase_len || ppe.len() > opts.max_phrase_len) continue;

    std::set<std::string> seen;
    auto emit = [&](const std::vector<const PhrasePair*>& subs) {
      SCFGRule rule;
      if (!build_rule(parent, subs, mt, pe, a, opts, &rule)) return;
      if (seen.insert(rule.key()).second) out.push_back(std::move(rule));
    };

    emit({});

    std::vector<const PhrasePair*> inner;
    for (const auto& sub : phrases) {
      Span smt{sub.mt_begin, sub.mt_end};
      Span spe{sub.pe_begin, sub.pe_end};
      if (!smt.within(pmt) || !spe.within(ppe)) continue;
      if (sub == parent) continue;
      inner.push_back(&sub);
    }

    for (const auto* s1 : inner) emit({s1});

    for (std::size_t x = 0; x < inner.size(); ++x) {
      for (std::size_t y = 0; y < inner.size(); ++y) {
        const auto* s1 = inner[x];
        const auto* s2 = inner[y];
        if (s1->mt_end >= s2->mt_begin) continue;  // keep mt order, disjoint
        if (Span{s1->pe_begin, s1->pe_end}.overlaps({s2->pe_begin, s2->pe_end}))
          continue;
        emit({s1, s2});
      }
    }
  }
  return out;
}

void RuleCounts::add(const SCFGRule& rule) {
  auto& value = counts_[rule.key()];
  if (value.count == 0) value.rule = rule;
  value.count += 1;
  value.link_patterns[to_pharaoh(Alignment{rule.links})] += 1;
}

std::vector<RuleCounts::Entry> RuleCounts::entries() const {
  std::vector<Entry> out;
  out.reserve(counts_.size());
  for (const auto& [key, value] : counts_) {
    Entry e;
    e.rule = value.rule;
    e.count = value.count;
    // dominant link pattern; ties go to the lexicographically smaller string
    int64_t best = -1;
    std::string best_pattern;
    for (const auto& [pattern, c] : value.link_patterns) {
      if (c > best) {
        best = c;
        best_pattern = pattern;
      }
    }
    e.rule.links = from_pharaoh(best_pattern).links;
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

constexpr double kLexFloor = 1e-12;

double lexical_weight(const std::vector<RuleSymbol>& predicted,
                      const std::vector<RuleSymbol>& given,
                      const std::vector<Link>& links, bool predicted_is_tgt,
                      const TranslationTable& table) {
  double log_weight = 0.0;
  for (std::size_t pos = 0; pos < predicted.size(); ++pos) {
    if (predicted[pos].is_nt) continue;
    const std::string w = lowercase_token(predicted[pos].token);
    double best = -1.0;
    for (const auto& l : links) {
      int ppos = predicted_is_tgt ? l.j : l.i;
      int gpos = predicted_is_tgt ? l.i : l.j;
      if (ppos != static_cast<int>(pos)) continue;
      const std::string g = lowercase_token(given[gpos].token);
      best = std::max(best, table.prob(g, w));
    }
    if (best < 0.0) best = table.prob(TranslationTable::kNullToken, w);
    log_weight += std::log(std::max(best, kLexFloor));
  }
  return log_weight;
}

}  // namespace

RuleTable estimate_features(const RuleCounts& counts, const TranslationTable& forward,
                            const TranslationTable& reverse,
                            const ExtractOptions& opts) {
  auto entries = counts.entries();

  std::map<std::string, int64_t> src_marginal, tgt_marginal;
  GoodTuring gt;
  for (const auto& e : entries) {
    src_marginal[e.rule.src_string()] += e.count;
    tgt_marginal[e.rule.tgt_string()] += e.count;
    gt.observe(e.count);
  }

  RuleTable table;
  for (const auto& e : entries) {
    if (e.count < opts.min_count) continue;
    SCFGRule rule = e.rule;

    double joint = static_cast<double>(e.count);
    if (opts.good_turing)
      joint = std::min(gt.adjusted(e.count), static_cast<double>(e.count));
    double p_pe_given_mt = joint / static_cast<double>(src_marginal[rule.src_string()]);
    double p_mt_given_pe = joint / static_cast<double>(tgt_marginal[rule.tgt_string()]);
    if (opts.good_turing && e.count == 1) {
      double cap = 1.0 / 1.5;
      p_pe_given_mt = std::min(p_pe_given_mt, cap);
      p_mt_given_pe = std::min(p_mt_given_pe, cap);
    }

    rule.features.log_p_pe_given_mt = std::log(p_pe_given_mt);
    rule.features.log_p_mt_given_pe = std::log(p_mt_given_pe);
    rule.features.log_lex_pe_given_mt =
        lexical_weight(rule.tgt, rule.src, rule.links, true, forward);
    rule.features.log_lex_mt_given_pe =
        lexical_weight(rule.src, rule.tgt, rule.links, false, reverse);
    rule.features.log_phrase_penalty = -1.0;
    table.rules.push_back(std::move(rule));
  }
  return table;
}

namespace {

// gzip with a pinned header (zero mtime, fixed OS byte) so identical rule
// tables serialize to identical bytes.
void gzip_write(const std::string& path, const std::string& data) {
  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK)
    throw data_error("deflateInit2 failed");
  gz_header header;
  std::memset(&header, 0, sizeof(header));
  header.time = 0;
  header.os = 3;
  deflateSetHeader(&zs, &header);

  std::string out;
  out.resize(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  if (rc != Z_STREAM_END) {
    deflateEnd(&zs);
    throw data_error("deflate failed on " + path);
  }
  out.resize(zs.total_out);
  deflateEnd(&zs);
  write_file(path, out);
}

std::string gzip_read(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw data_error("cannot open file: " + path);
  std::string out;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, n);
  bool bad = n < 0;
  gzclose(f);
  if (bad) throw data_error("gzip read failed on " + path);
  return out;
}

}  // namespace

void save_rule_table(const std::string& path, const RuleTable& table) {
  std::vector<const SCFGRule*> sorted;
  sorted.reserve(table.rules.size());
  for (const auto& r : table.rules) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const SCFGRule* a, const SCFGRule* b) { return a->key() < b->key(); });

  std::string data;
  char buf[256];
  for (const auto* r : sorted) {
    std::snprintf(buf, sizeof(buf), "%.10g %.10g %.10g %.10g -1",
                  r->features.log_p_mt_given_pe, r->features.log_p_pe_given_mt,
                  r->features.log_lex_mt_given_pe, r->features.log_lex_pe_given_mt);
    data += r->key();
    data += " ||| ";
    data += buf;
    data += " ||| ";
    data += to_pharaoh(Alignment{r->links});
    data += '\n';
  }
  gzip_write(path, data);
}

RuleTable load_rule_table(const std::string& path) {
  RuleTable table;
  std::string data = gzip_read(path);
  std::size_t lineno = 0;
  for (const auto& line : split_on(data, "\n")) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_on(line, " ||| ");
    if (fields.size() != 4)
      throw data_error(path + " line " + std::to_string(lineno) +
                       ": expected 4 |||-separated fields");
    SCFGRule rule;
    rule.src = parse_symbols(fields[0]);
    rule.tgt = parse_symbols(fields[1]);
    auto feats = split_ws(fields[2]);
    if (feats.size() != 5)
      throw data_error(path + " line " + std::to_string(lineno) +
                       ": expected 5 feature values");
    rule.features.log_p_mt_given_pe = std::stod(feats[0]);
    rule.features.log_p_pe_given_mt = std::stod(feats[1]);
    rule.features.log_lex_mt_given_pe = std::stod(feats[2]);
    rule.features.log_lex_pe_given_mt = std::stod(feats[3]);
    rule.features.log_phrase_penalty = std::stod(feats[4]);
    rule.links = from_pharaoh(fields[3]).links;
    table.rules.push_back(std::move(rule));
  }
  return table;
}

}  // namespace sape
