#include "sape/edit_aligner.hpp"

#include <algorithm>
#include <functional>

namespace sape {

void Alignment::add(Link link) {
  auto it = std::lower_bound(links.begin(), links.end(), link);
  if (it != links.end() && *it == link) return;
  links.insert(it, link);
}

bool Alignment::has(int i, int j) const {
  Link probe{i, j, MatchStage::none};
  auto it = std::lower_bound(links.begin(), links.end(), probe);
  return it != links.end() && *it == probe;
}

bool Alignment::covers_i(int i) const {
  for (const auto& l : links)
    if (l.i == i) return true;
  return false;
}

bool Alignment::covers_j(int j) const {
  for (const auto& l : links)
    if (l.j == j) return true;
  return false;
}

std::string to_pharaoh(const Alignment& a) {
  std::string out;
  for (std::size_t k = 0; k < a.links.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(a.links[k].i) + "-" + std::to_string(a.links[k].j);
  }
  return out;
}

Alignment from_pharaoh(const std::string& line) {
  Alignment a;
  for (const auto& pair : split_ws(line)) {
    std::size_t dash = pair.find('-');
    if (dash == std::string::npos)
      throw data_error("bad alignment pair '" + pair + "'");
    a.add({std::stoi(pair.substr(0, dash)), std::stoi(pair.substr(dash + 1)),
           MatchStage::none});
  }
  return a;
}

SynonymLexicon SynonymLexicon::from_file(const std::string& path) {
  SynonymLexicon lex;
  for (const auto& line : read_lines(path)) {
    auto members = split_ws(line);
    if (members.size() >= 2) lex.add_group(members);
  }
  return lex;
}

void SynonymLexicon::add_group(const std::vector<std::string>& members) {
  for (const auto& m : members) groups_of_[m].push_back(next_group_);
  ++next_group_;
}

bool SynonymLexicon::synonyms(const std::string& a, const std::string& b) const {
  auto ia = groups_of_.find(a);
  auto ib = groups_of_.find(b);
  if (ia == groups_of_.end() || ib == groups_of_.end()) return false;
  for (int ga : ia->second)
    for (int gb : ib->second)
      if (ga == gb) return true;
  return false;
}

std::vector<Link> stage_match(const Sentence& hyp, const Sentence& ref, MatchStage stage,
                              const SynonymLexicon& lexicon,
                              const std::vector<bool>& covered_h,
                              const std::vector<bool>& covered_r) {
  std::vector<Link> out;
  for (int i = 0; i < static_cast<int>(hyp.size()); ++i) {
    if (covered_h[i]) continue;
    for (int j = 0; j < static_cast<int>(ref.size()); ++j) {
      if (covered_r[j]) continue;
      bool matched = false;
      switch (stage) {
        case MatchStage::exact:
          matched = hyp[i] == ref[j];
          break;
        case MatchStage::stem:
          matched = porter_stem(lowercase_token(hyp[i])) ==
                    porter_stem(lowercase_token(ref[j]));
          break;
        case MatchStage::synonym:
          matched = lexicon.synonyms(hyp[i], ref[j]);
          break;
        case MatchStage::none:
          break;
      }
      if (matched) out.push_back({i, j, stage});
    }
  }
  return out;
}

int count_crossings(const std::vector<Link>& links) {
  int crossings = 0;
  for (std::size_t a = 0; a < links.size(); ++a)
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      long di = links[a].i - links[b].i;
      long dj = links[a].j - links[b].j;
      if (di * dj < 0) ++crossings;
    }
  return crossings;
}

int count_crossings(const Alignment& a) { return count_crossings(a.links); }

namespace {

constexpr long kNodeBudget = 2000000;

int crossings_with(const std::vector<Link>& chosen, const std::vector<Link>& fixed,
                   const Link& l) {
  int c = 0;
  for (const auto& o : chosen) {
    long di = o.i - l.i, dj = o.j - l.j;
    if (di * dj < 0) ++c;
  }
  for (const auto& o : fixed) {
    long di = o.i - l.i, dj = o.j - l.j;
    if (di * dj < 0) ++c;
  }
  return c;
}

// Maximum bipartite matching cardinality over the candidate links (Kuhn's
// augmenting paths); positions are remapped to dense ids first.
int max_matching_size(const std::vector<Link>& candidates) {
  std::vector<int> hs, rs;
  for (const auto& l : candidates) {
    hs.push_back(l.i);
    rs.push_back(l.j);
  }
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  auto hid = [&](int i) {
    return static_cast<int>(std::lower_bound(hs.begin(), hs.end(), i) - hs.begin());
  };
  auto rid = [&](int j) {
    return static_cast<int>(std::lower_bound(rs.begin(), rs.end(), j) - rs.begin());
  };
  std::vector<std::vector<int>> adj(hs.size());
  for (const auto& l : candidates) adj[hid(l.i)].push_back(rid(l.j));
  std::vector<int> match_r(rs.size(), -1);
  std::vector<char> seen;
  std::function<bool(int)> try_kuhn = [&](int u) {
    for (int v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_r[v] < 0 || try_kuhn(match_r[v])) {
        match_r[v] = u;
        return true;
      }
    }
    return false;
  };
  int size = 0;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    seen.assign(rs.size(), 0);
    if (try_kuhn(static_cast<int>(u))) ++size;
  }
  return size;
}

struct StageSearch {
  StageSearch(const std::vector<Link>& c, const std::vector<Link>& f)
      : cands(c), fixed(f) {}

  const std::vector<Link>& cands;
  const std::vector<Link>& fixed;
  int target_card = 0;
  int best_cross = -1;          // -1 until a full-cardinality solution is found
  long nodes = 0;
  bool budget_exceeded = false;
  std::vector<Link> chosen;
  std::vector<Link> result;
  bool lex_phase = false;       // stop at the first (target_card, best_cross) solution
  bool done = false;

  // Remaining matchable upper bound: distinct uncovered positions on the
  // scarcer side among candidates[idx..].
  int remaining_bound(std::size_t idx, const std::vector<bool>& used_h,
                      const std::vector<bool>& used_r) const {
    std::vector<int> hseen, rseen;
    for (std::size_t k = idx; k < cands.size(); ++k) {
      if (!used_h[cands[k].i] &&
          std::find(hseen.begin(), hseen.end(), cands[k].i) == hseen.end())
        hseen.push_back(cands[k].i);
      if (!used_r[cands[k].j] &&
          std::find(rseen.begin(), rseen.end(), cands[k].j) == rseen.end())
        rseen.push_back(cands[k].j);
    }
    return static_cast<int>(std::min(hseen.size(), rseen.size()));
  }

  void dfs(std::size_t idx, int cross, std::vector<bool>& used_h,
           std::vector<bool>& used_r) {
    if (done || budget_exceeded) return;
    if (++nodes > kNodeBudget) {
      budget_exceeded = true;
      return;
    }
    int card = static_cast<int>(chosen.size());
    if (card + remaining_bound(idx, used_h, used_r) < target_card) return;
    if (best_cross >= 0 && (lex_phase ? cross > best_cross : cross >= best_cross))
      return;
    if (card == target_card) {
      best_cross = cross;
      result = chosen;
      if (lex_phase) done = true;
      return;
    }
    if (idx >= cands.size()) return;
    const Link& l = cands[idx];
    if (!used_h[l.i] && !used_r[l.j]) {
      int delta = crossings_with(chosen, fixed, l);
      used_h[l.i] = used_r[l.j] = true;
      chosen.push_back(l);
      dfs(idx + 1, cross + delta, used_h, used_r);
      chosen.pop_back();
      used_h[l.i] = used_r[l.j] = false;
    }
    dfs(idx + 1, cross, used_h, used_r);
  }
};

std::vector<Link> greedy_stage_links(const std::vector<Link>& candidates,
                                     const std::vector<Link>& fixed) {
  std::vector<Link> chosen;
  std::vector<int> used_r;
  int max_h = -1;
  for (const auto& l : candidates) max_h = std::max(max_h, l.i);
  for (int i = 0; i <= max_h; ++i) {
    const Link* best = nullptr;
    int best_cross = 0;
    for (const auto& l : candidates) {
      if (l.i != i) continue;
      if (std::find(used_r.begin(), used_r.end(), l.j) != used_r.end()) continue;
      int c = crossings_with(chosen, fixed, l);
      if (!best || c < best_cross || (c == best_cross && l.j < best->j)) {
        best = &l;
        best_cross = c;
      }
    }
    if (best) {
      chosen.push_back(*best);
      used_r.push_back(best->j);
    }
  }
  return chosen;
}

}  // namespace

std::vector<Link> select_stage_links(const std::vector<Link>& candidates,
                                     const std::vector<Link>& fixed, bool exact) {
  if (candidates.empty()) return {};
  if (!exact) return greedy_stage_links(candidates, fixed);

  std::vector<Link> cands = candidates;
  std::sort(cands.begin(), cands.end());

  int max_pos_h = 0, max_pos_r = 0;
  for (const auto& l : cands) {
    max_pos_h = std::max(max_pos_h, l.i);
    max_pos_r = std::max(max_pos_r, l.j);
  }

  StageSearch search{cands, fixed};
  search.target_card = max_matching_size(cands);

  std::vector<bool> used_h(max_pos_h + 1, false), used_r(max_pos_r + 1, false);
  search.dfs(0, 0, used_h, used_r);
  if (search.budget_exceeded || search.best_cross < 0)
    return greedy_stage_links(candidates, fixed);

  // Second pass: first depth-first solution hitting (target_card, best_cross)
  // with include-before-exclude order is the lexicographically smallest.
  StageSearch lex{cands, fixed};
  lex.target_card = search.target_card;
  lex.best_cross = search.best_cross;
  lex.lex_phase = true;
  std::fill(used_h.begin(), used_h.end(), false);
  std::fill(used_r.begin(), used_r.end(), false);
  lex.dfs(0, 0, used_h, used_r);
  if (lex.budget_exceeded || lex.result.empty())
    return search.result;
  return lex.result;
}

Alignment align(const Sentence& hyp, const Sentence& ref, const SynonymLexicon& lexicon,
                const AlignerOptions& opts) {
  Alignment result;
  std::vector<bool> covered_h(hyp.size(), false), covered_r(ref.size(), false);
  bool exact_search =
      static_cast<int>(std::max(hyp.size(), ref.size())) <= opts.exact_matching_max_len;

  const MatchStage stages[] = {MatchStage::exact, MatchStage::stem, MatchStage::synonym};
  for (MatchStage stage : stages) {
    if (stage == MatchStage::synonym && lexicon.empty()) continue;
    auto candidates = stage_match(hyp, ref, stage, lexicon, covered_h, covered_r);
    if (candidates.empty()) continue;
    auto picked = select_stage_links(candidates, result.links, exact_search);
    for (const auto& l : picked) {
      result.add(l);
      covered_h[l.i] = true;
      covered_r[l.j] = true;
    }
  }
  return result;
}

}  // namespace sape
