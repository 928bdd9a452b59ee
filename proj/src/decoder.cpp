#include "sape/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>
#include <set>

namespace sape {

namespace {
const double kLn10 = std::log(10.0);
}

std::array<double, kNumFeatures> WeightVector::as_array() const {
  return {p_mt_given_pe, p_pe_given_mt, lex_mt_given_pe, lex_pe_given_mt,
          phrase_penalty, glue, lm, word_penalty};
}

WeightVector WeightVector::from_array(const std::array<double, kNumFeatures>& a) {
  WeightVector w;
  w.p_mt_given_pe = a[0];
  w.p_pe_given_mt = a[1];
  w.lex_mt_given_pe = a[2];
  w.lex_pe_given_mt = a[3];
  w.phrase_penalty = a[4];
  w.glue = a[5];
  w.lm = a[6];
  w.word_penalty = a[7];
  return w;
}

const std::array<std::string, kNumFeatures>& WeightVector::feature_names() {
  static const std::array<std::string, kNumFeatures> names = {
      "p_mt_given_pe", "p_pe_given_mt", "lex_mt_given_pe", "lex_pe_given_mt",
      "phrase_penalty", "glue",         "lm",              "word_penalty"};
  return names;
}

void WeightVector::save(const std::string& path) const {
  auto values = as_array();
  std::vector<std::string> lines;
  char buf[64];
  for (int f = 0; f < kNumFeatures; ++f) {
    std::snprintf(buf, sizeof(buf), "%.10g", values[f]);
    lines.push_back(feature_names()[f] + "\t" + buf);
  }
  write_lines(path, lines);
}

WeightVector WeightVector::load(const std::string& path) {
  std::array<double, kNumFeatures> values{};
  std::array<bool, kNumFeatures> seen{};
  for (const auto& line : read_lines(path)) {
    if (line.empty()) continue;
    auto fields = split_on(line, "\t");
    if (fields.size() != 2) throw data_error(path + ": expected name<TAB>value");
    bool found = false;
    for (int f = 0; f < kNumFeatures; ++f) {
      if (feature_names()[f] == fields[0]) {
        values[f] = std::stod(fields[1]);
        seen[f] = true;
        found = true;
      }
    }
    if (!found) throw data_error(path + ": unknown feature '" + fields[0] + "'");
  }
  for (int f = 0; f < kNumFeatures; ++f)
    if (!seen[f]) throw data_error(path + ": missing feature " + feature_names()[f]);
  return WeightVector::from_array(values);
}

double rule_weight(const SCFGRule& rule, const WeightVector& w) {
  return w.p_mt_given_pe * rule.features.log_p_mt_given_pe +
         w.p_pe_given_mt * rule.features.log_p_pe_given_mt +
         w.lex_mt_given_pe * rule.features.log_lex_mt_given_pe +
         w.lex_pe_given_mt * rule.features.log_lex_pe_given_mt +
         w.phrase_penalty * rule.features.log_phrase_penalty;
}

double glue_weight(const WeightVector& w) { return -w.glue; }

// ---------------------------------------------------------------------------
// chart internals

namespace {

struct LmState {
  std::vector<std::string> prefix;  // first min(len, order-1) words
  std::vector<std::string> suffix;  // last min(len, order-1) words
  long len = 0;

  std::string key() const { return join(prefix) + "\x01" + join(suffix); }
};

struct Edge {
  StepKind kind = StepKind::rule;
  const SCFGRule* rule = nullptr;
  std::string token;  // pass-through terminal
  int begin = 0, end = 0;
  std::array<int, 2> children = {-1, -1};
  int n_children = 0;
  double edge_const = 0.0;  // nonlm_const + lm_weight * lm_interaction
  double nonlm_const = 0.0;
};

struct SubDeriv {
  double est = 0.0;    // additive estimate used for in-item ordering
  double nonlm = 0.0;  // rule + glue + word-penalty parts
  Sentence out;
  int edge = -1;
  std::array<int, 2> ranks = {0, 0};
};

struct FrontierEntry {
  double est;
  std::string out_key;
  int edge;
  std::array<int, 2> ranks;
  SubDeriv deriv;
};
struct FrontierOrder {
  bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
    if (a.est != b.est) return a.est < b.est;          // max-heap on est
    return a.out_key > b.out_key;                      // then lex-smaller first
  }
};

struct Item {
  LmState state;
  std::vector<Edge> edges;
  double viterbi_est = 0.0;
  double viterbi_nonlm = 0.0;
  Sentence viterbi_out;

  // lazy k-best expansion
  std::vector<SubDeriv> derivs;
  std::priority_queue<FrontierEntry, std::vector<FrontierEntry>, FrontierOrder>
      frontier;
  std::set<std::pair<int, std::array<int, 2>>> pushed;
  bool frontier_seeded = false;
};

}  // namespace

struct Decoder::Chart {
  const Decoder* decoder = nullptr;
  Sentence input;
  std::vector<Item> items;
  // cells[x][i][j] -> state key -> item id; x: 0 = X, 1 = S (spans [0, j))
  std::map<std::pair<int, int>, std::map<std::string, int>> x_cells;
  std::vector<std::map<std::string, int>> s_cells;

  const NGramLM& lm() const { return decoder->lm_; }
  int order() const { return decoder->lm_.order(); }

  double cond_ln(const std::vector<std::string>& ctx, const std::string& w) const {
    return kLn10 * lm().cond_log10(ctx, w);
  }

  // Composes target segments (terminals and child items) into the new item
  // state and the language-model interaction term (terminal scores plus
  // context-extension corrections for child prefixes).
  struct Composed {
    LmState state;
    double lm_interaction = 0.0;
  };

  struct Segment {
    bool is_child = false;
    std::string token;
    int child_item = -1;
  };

  Composed compose(const std::vector<Segment>& segments) const {
    const std::size_t ctx_len = static_cast<std::size_t>(std::max(order() - 1, 0));
    Composed out;
    std::vector<std::string> ctx;
    auto push_ctx = [&](const std::string& w) {
      ctx.push_back(w);
      if (ctx.size() > ctx_len) ctx.erase(ctx.begin());
    };
    for (const auto& seg : segments) {
      if (!seg.is_child) {
        out.lm_interaction += cond_ln(ctx, seg.token);
        if (out.state.prefix.size() < ctx_len) out.state.prefix.push_back(seg.token);
        push_ctx(seg.token);
        out.state.len += 1;
        continue;
      }
      const LmState& child = items_state(seg.child_item);
      std::vector<std::string> entry_ctx = ctx;
      for (std::size_t k = 0; k < child.prefix.size(); ++k) {
        std::vector<std::string> trunc(child.prefix.begin(), child.prefix.begin() + k);
        if (!entry_ctx.empty()) {
          std::vector<std::string> full = entry_ctx;
          full.insert(full.end(), trunc.begin(), trunc.end());
          out.lm_interaction +=
              cond_ln(full, child.prefix[k]) - cond_ln(trunc, child.prefix[k]);
        }
        if (out.state.prefix.size() < ctx_len)
          out.state.prefix.push_back(child.prefix[k]);
      }
      if (child.len >= static_cast<long>(ctx_len)) {
        ctx = child.suffix;
      } else {
        for (const auto& w : child.prefix) push_ctx(w);
      }
      out.state.len += child.len;
    }
    out.state.suffix = ctx;
    return out;
  }

  const LmState& items_state(int id) const { return items[id].state; }
};

// ---------------------------------------------------------------------------

Decoder::Decoder(const RuleTable& grammar, const NGramLM& lm, const WeightVector& w,
                 const DecoderParams& params)
    : grammar_(grammar), lm_(lm), weights_(w), params_(params) {
  for (const auto& rule : grammar_.rules) {
    if (rule.src.empty()) continue;
    if (rule.src.front().is_nt)
      rules_nt_first_.push_back(&rule);
    else
      rules_by_first_token_[rule.src.front().token].push_back(&rule);
  }
}

namespace {

// All assignments of nonterminal gaps for a rule matched against
// input[i..j); each assignment lists one (begin, end) per source
// nonterminal in source order.
void match_rule(const SCFGRule& rule, const Sentence& input, int i, int j,
                std::size_t sym, int pos, std::vector<std::pair<int, int>>& gaps,
                std::vector<std::vector<std::pair<int, int>>>& out) {
  if (sym == rule.src.size()) {
    if (pos == j) out.push_back(gaps);
    return;
  }
  const RuleSymbol& s = rule.src[sym];
  if (!s.is_nt) {
    if (pos < j && input[pos] == s.token)
      match_rule(rule, input, i, j, sym + 1, pos + 1, gaps, out);
    return;
  }
  for (int end = pos + 1; end <= j; ++end) {
    gaps.push_back({pos, end});
    match_rule(rule, input, i, j, sym + 1, end, gaps, out);
    gaps.pop_back();
  }
}

double passthrough_weight(const WeightVector& w) {
  return -(w.p_mt_given_pe + w.p_pe_given_mt + w.lex_mt_given_pe +
           w.lex_pe_given_mt + w.phrase_penalty);
}

}  // namespace

void Decoder::build_chart(const Sentence& input, Chart* chart) const {
  const int n = static_cast<int>(input.size());
  chart->decoder = this;
  chart->input = input;
  chart->s_cells.resize(n + 1);

  auto insert_edge = [&](std::map<std::string, int>& cell, Edge edge,
                         const std::vector<Chart::Segment>& segments) {
    auto composed = chart->compose(segments);
    edge.edge_const = edge.nonlm_const + weights_.lm * composed.lm_interaction;

    double est = edge.edge_const;
    double nonlm = edge.nonlm_const;
    Sentence out;
    for (const auto& seg : segments) {
      if (seg.is_child) {
        const Item& child = chart->items[seg.child_item];
        est += child.viterbi_est;
        nonlm += child.viterbi_nonlm;
        out.insert(out.end(), child.viterbi_out.begin(), child.viterbi_out.end());
      } else {
        out.push_back(seg.token);
      }
    }

    std::string key = composed.state.key();
    auto it = cell.find(key);
    if (it == cell.end()) {
      Item item;
      item.state = composed.state;
      item.viterbi_est = est;
      item.viterbi_nonlm = nonlm;
      item.viterbi_out = std::move(out);
      item.edges.push_back(std::move(edge));
      chart->items.push_back(std::move(item));
      cell[key] = static_cast<int>(chart->items.size()) - 1;
      return;
    }
    Item& item = chart->items[it->second];
    item.edges.push_back(std::move(edge));
    std::string a = join(out), b = join(item.viterbi_out);
    if (est > item.viterbi_est || (est == item.viterbi_est && a < b)) {
      item.viterbi_est = est;
      item.viterbi_nonlm = nonlm;
      item.viterbi_out = std::move(out);
    }
  };

  auto beam_prune = [&](std::map<std::string, int>& cell) {
    if (params_.beam <= 0 || static_cast<int>(cell.size()) <= params_.beam) return;
    std::vector<std::pair<std::string, int>> ranked(cell.begin(), cell.end());
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      const Item& ia = chart->items[a.second];
      const Item& ib = chart->items[b.second];
      if (ia.viterbi_est != ib.viterbi_est) return ia.viterbi_est > ib.viterbi_est;
      return join(ia.viterbi_out) < join(ib.viterbi_out);
    });
    cell.clear();
    for (int k = 0; k < params_.beam; ++k) cell.insert(ranked[k]);
  };

  auto rule_segments = [&](const SCFGRule& rule,
                           const std::vector<int>& gap_items) {
    std::vector<Chart::Segment> segments;
    for (const auto& sym : rule.tgt) {
      if (sym.is_nt)
        segments.push_back({true, "", gap_items[sym.nt_index - 1]});
      else
        segments.push_back({false, sym.token, -1});
    }
    return segments;
  };

  for (int width = 1; width <= n; ++width) {
    for (int i = 0; i + width <= n; ++i) {
      int j = i + width;
      auto& cell = chart->x_cells[{i, j}];

      if (width == 1) {
        Edge edge;
        edge.kind = StepKind::pass_through;
        edge.token = input[i];
        edge.begin = i;
        edge.end = j;
        edge.nonlm_const = passthrough_weight(weights_) - weights_.word_penalty;
        insert_edge(cell, edge, {{false, input[i], -1}});
      }

      if (width <= params_.search_depth) {
        std::vector<const SCFGRule*> candidates = rules_nt_first_;
        auto it = rules_by_first_token_.find(input[i]);
        if (it != rules_by_first_token_.end())
          candidates.insert(candidates.end(), it->second.begin(), it->second.end());

        for (const auto* rule : candidates) {
          std::vector<std::vector<std::pair<int, int>>> assignments;
          std::vector<std::pair<int, int>> gaps;
          match_rule(*rule, input, i, j, 0, i, gaps, assignments);
          int terminal_count = 0;
          for (const auto& sym : rule->tgt) terminal_count += sym.is_nt ? 0 : 1;
          for (const auto& assign : assignments) {
            // enumerate item combinations per gap
            std::vector<std::vector<int>> gap_choices;
            bool feasible = true;
            for (const auto& [gb, ge] : assign) {
              auto cit = chart->x_cells.find({gb, ge});
              if (cit == chart->x_cells.end() || cit->second.empty()) {
                feasible = false;
                break;
              }
              std::vector<int> ids;
              for (const auto& [key, id] : cit->second) ids.push_back(id);
              gap_choices.push_back(std::move(ids));
            }
            if (!feasible) continue;
            std::vector<int> combo(gap_choices.size(), 0);
            while (true) {
              std::vector<int> gap_items;
              for (std::size_t g = 0; g < combo.size(); ++g)
                gap_items.push_back(gap_choices[g][combo[g]]);
              Edge edge;
              edge.kind = StepKind::rule;
              edge.rule = rule;
              edge.begin = i;
              edge.end = j;
              edge.n_children = static_cast<int>(gap_items.size());
              for (std::size_t g = 0; g < gap_items.size(); ++g)
                edge.children[g] = gap_items[g];
              edge.nonlm_const =
                  rule_weight(*rule, weights_) - weights_.word_penalty * terminal_count;
              insert_edge(cell, edge, rule_segments(*rule, gap_items));
              // advance the odometer
              std::size_t g = 0;
              for (; g < combo.size(); ++g) {
                if (++combo[g] < static_cast<int>(gap_choices[g].size())) break;
                combo[g] = 0;
              }
              if (g == combo.size()) break;
            }
          }
        }
      }
      beam_prune(cell);
    }
  }

  for (int j = 1; j <= n; ++j) {
    auto& cell = chart->s_cells[j];
    auto xit = chart->x_cells.find({0, j});
    if (xit != chart->x_cells.end()) {
      for (const auto& [key, id] : xit->second) {
        Edge edge;
        edge.kind = StepKind::glue_promote;
        edge.begin = 0;
        edge.end = j;
        edge.n_children = 1;
        edge.children[0] = id;
        edge.nonlm_const = 0.0;
        insert_edge(cell, edge, {{true, "", id}});
      }
    }
    for (int m = 1; m < j; ++m) {
      auto mit = chart->x_cells.find({m, j});
      if (mit == chart->x_cells.end()) continue;
      for (const auto& [skey, sid] : chart->s_cells[m]) {
        for (const auto& [xkey, xid] : mit->second) {
          Edge edge;
          edge.kind = StepKind::glue_concat;
          edge.begin = 0;
          edge.end = j;
          edge.n_children = 2;
          edge.children[0] = sid;
          edge.children[1] = xid;
          edge.nonlm_const = glue_weight(weights_);
          insert_edge(cell, edge, {{true, "", sid}, {true, "", xid}});
        }
      }
    }
    beam_prune(cell);
  }
}

// ---------------------------------------------------------------------------
// k-best extraction

namespace {

class KBest {
 public:
  explicit KBest(Decoder::Chart& chart) : chart_(chart) {}

  // j-th best sub-derivation of an item, or nullptr when exhausted.
  const SubDeriv* get(int item_id, int rank) {
    Item& item = chart_.items[item_id];
    seed(item_id);
    while (static_cast<int>(item.derivs.size()) <= rank && !item.frontier.empty()) {
      FrontierEntry top = item.frontier.top();
      item.frontier.pop();
      item.derivs.push_back(top.deriv);
      expand(item_id, top.edge, top.ranks);
    }
    if (rank < static_cast<int>(item.derivs.size())) return &item.derivs[rank];
    return nullptr;
  }

 private:
  void seed(int item_id) {
    Item& item = chart_.items[item_id];
    if (item.frontier_seeded) return;
    item.frontier_seeded = true;
    for (std::size_t e = 0; e < item.edges.size(); ++e)
      push(item_id, static_cast<int>(e), {0, 0});
  }

  void expand(int item_id, int edge, std::array<int, 2> ranks) {
    const Edge& e = chart_.items[item_id].edges[edge];
    for (int c = 0; c < e.n_children; ++c) {
      auto next = ranks;
      next[c] += 1;
      push(item_id, edge, next);
    }
  }

  void push(int item_id, int edge_idx, std::array<int, 2> ranks) {
    Item& item = chart_.items[item_id];
    if (!item.pushed.insert({edge_idx, ranks}).second) return;
    const Edge& edge = item.edges[edge_idx];

    SubDeriv deriv;
    deriv.est = edge.edge_const;
    deriv.nonlm = edge.nonlm_const;
    deriv.edge = edge_idx;
    deriv.ranks = ranks;

    std::array<const SubDeriv*, 2> child_derivs = {nullptr, nullptr};
    for (int c = 0; c < edge.n_children; ++c) {
      child_derivs[c] = get(edge.children[c], ranks[c]);
      if (!child_derivs[c]) return;  // rank beyond the child's space
      deriv.est += child_derivs[c]->est;
      deriv.nonlm += child_derivs[c]->nonlm;
    }

    switch (edge.kind) {
      case StepKind::pass_through:
        deriv.out.push_back(edge.token);
        break;
      case StepKind::glue_promote:
        deriv.out = child_derivs[0]->out;
        break;
      case StepKind::glue_concat:
        deriv.out = child_derivs[0]->out;
        deriv.out.insert(deriv.out.end(), child_derivs[1]->out.begin(),
                         child_derivs[1]->out.end());
        break;
      case StepKind::rule:
        for (const auto& sym : edge.rule->tgt) {
          if (sym.is_nt) {
            const auto& part = child_derivs[sym.nt_index - 1]->out;
            deriv.out.insert(deriv.out.end(), part.begin(), part.end());
          } else {
            deriv.out.push_back(sym.token);
          }
        }
        break;
    }

    FrontierEntry entry{deriv.est, join(deriv.out), edge_idx, ranks, deriv};
    item.frontier.push(std::move(entry));
  }

  Decoder::Chart& chart_;
};

}  // namespace

namespace {

void walk_derivation(const Decoder::Chart& chart, int item_id, int rank,
                     Derivation* d);

}  // namespace

Derivation Decoder::materialize(const Chart& chart, int item_id, int rank) const {
  Derivation d;
  walk_derivation(chart, item_id, rank, &d);
  d.output = chart.items[item_id].derivs[rank].out;
  d.features[6] = kLn10 * lm_.score_log10(d.output);
  d.features[7] = -static_cast<double>(d.output.size());
  auto wv = weights_.as_array();
  d.score = 0.0;
  for (int f = 0; f < kNumFeatures; ++f) d.score += wv[f] * d.features[f];
  return d;
}

namespace {

void walk_derivation(const Decoder::Chart& chart, int item_id, int rank,
                     Derivation* d) {
  const Item& item = chart.items[item_id];
  const SubDeriv& sd = item.derivs[rank];
  const Edge& edge = item.edges[sd.edge];

  DerivationStep step;
  step.begin = edge.begin;
  step.end = edge.end;
  switch (edge.kind) {
    case StepKind::rule:
      step.kind = StepKind::rule;
      step.rule = edge.rule;
      d->features[0] += edge.rule->features.log_p_mt_given_pe;
      d->features[1] += edge.rule->features.log_p_pe_given_mt;
      d->features[2] += edge.rule->features.log_lex_mt_given_pe;
      d->features[3] += edge.rule->features.log_lex_pe_given_mt;
      d->features[4] += edge.rule->features.log_phrase_penalty;
      break;
    case StepKind::pass_through:
      step.kind = StepKind::pass_through;
      for (int f = 0; f <= 4; ++f) d->features[f] += -1.0;
      break;
    case StepKind::glue_promote:
      step.kind = StepKind::glue_promote;
      break;
    case StepKind::glue_concat:
      step.kind = StepKind::glue_concat;
      d->features[5] += -1.0;
      break;
  }
  d->steps.push_back(step);
  for (int c = 0; c < edge.n_children; ++c)
    walk_derivation(chart, edge.children[c], sd.ranks[c], d);
}

}  // namespace

std::vector<Derivation> Decoder::kbest(const Sentence& input, int k) const {
  if (k < 1) throw data_error("kbest: k must be >= 1");

  if (input.empty()) {
    Derivation d;
    d.features[6] = kLn10 * lm_.cond_log10({NGramLM::kSentStart}, NGramLM::kSentEnd);
    auto wv = weights_.as_array();
    d.score = 0.0;
    for (int f = 0; f < kNumFeatures; ++f) d.score += wv[f] * d.features[f];
    return {d};
  }

  Chart chart;
  build_chart(input, &chart);
  KBest extractor(chart);

  const auto& goal_cell = chart.s_cells[input.size()];
  struct Candidate {
    Derivation derivation;
    std::string out_key;
  };
  std::vector<Candidate> candidates;

  for (const auto& [key, item_id] : goal_cell) {
    std::set<std::string> outputs_seen;
    for (int rank = 0; static_cast<int>(outputs_seen.size()) < k; ++rank) {
      const SubDeriv* sd = extractor.get(item_id, rank);
      if (!sd) break;
      std::string out_key = join(sd->out);
      if (!outputs_seen.insert(out_key).second) continue;
      candidates.push_back({materialize(chart, item_id, rank), out_key});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.derivation.score != b.derivation.score)
      return a.derivation.score > b.derivation.score;
    return a.out_key < b.out_key;
  });

  std::vector<Derivation> out;
  std::set<std::string> seen;
  for (auto& c : candidates) {
    if (!seen.insert(c.out_key).second) continue;
    out.push_back(std::move(c.derivation));
    if (static_cast<int>(out.size()) == k) break;
  }
  return out;
}

Derivation Decoder::decode(const Sentence& input) const {
  return kbest(input, 1).front();
}

}  // namespace sape
