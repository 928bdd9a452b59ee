#include "sape/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sape/good_turing.hpp"

namespace sape {

namespace {

constexpr double kStartLogProb = -99.0;  // the start marker is never predicted
constexpr int kDiscountCeiling = 5;      // Katz convention: discount counts 1..5
constexpr double kMinLeftover = 1e-7;

std::string join_key(const std::vector<std::string>& tokens) { return join(tokens); }

// Good-Turing discount with the Katz ceiling; falls back to the raw count
// whenever the adjustment is unusable (zero, negative, or above the raw).
double discounted(const GoodTuring& gt, int64_t c) {
  if (c > kDiscountCeiling) return static_cast<double>(c);
  double adj = gt.adjusted(c);
  if (adj <= 0.0 || adj > static_cast<double>(c)) return static_cast<double>(c);
  return adj;
}

std::string fmt7(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.7g", v);
  return buf;
}

}  // namespace

NGramLM NGramLM::train(const std::vector<Sentence>& corpus, int order) {
  if (corpus.empty()) throw data_error("train_lm: empty corpus");
  if (order < 1) throw data_error("train_lm: order must be >= 1");

  NGramLM lm;
  lm.order_ = order;
  lm.tables_.resize(order);

  std::vector<std::map<std::string, int64_t>> counts(order);
  for (const auto& sent : corpus) {
    std::vector<std::string> padded;
    padded.reserve(sent.size() + 2);
    padded.push_back(kSentStart);
    for (const auto& t : sent) padded.push_back(t);
    padded.push_back(kSentEnd);
    for (int n = 1; n <= order; ++n) {
      for (std::size_t s = 0; s + n <= padded.size(); ++s) {
        counts[n - 1][join_key({padded.begin() + s, padded.begin() + s + n})] += 1;
      }
    }
  }

  // unigrams: the start marker is context-only, the unknown token takes the
  // discounted leftover mass
  GoodTuring uni_gt;
  int64_t total = 0;
  for (const auto& [w, c] : counts[0]) {
    if (w == kSentStart) continue;
    uni_gt.observe(c);
    total += c;
  }
  double seen_sum = 0.0;
  std::map<std::string, double> uni_prob;
  for (const auto& [w, c] : counts[0]) {
    if (w == kSentStart) continue;
    double p = discounted(uni_gt, c) / static_cast<double>(total);
    uni_prob[w] = p;
    seen_sum += p;
  }
  double unk_mass = 1.0 - seen_sum;
  bool unk_in_corpus = uni_prob.count(kUnknown) > 0;
  if (!unk_in_corpus) {
    if (unk_mass < kMinLeftover) {
      unk_mass = 0.5 / static_cast<double>(total);
      double scale = (1.0 - unk_mass) / seen_sum;
      for (auto& [w, p] : uni_prob) p *= scale;
    }
    uni_prob[kUnknown] = unk_mass;
  } else if (unk_mass > 0.0) {
    uni_prob[kUnknown] += unk_mass;
  }

  for (const auto& [w, p] : uni_prob)
    lm.tables_[0][w] = {std::log10(p), 0.0, false};
  lm.tables_[0][kSentStart] = {kStartLogProb, 0.0, false};
  for (const auto& [w, e] : lm.tables_[0]) lm.vocab_.insert(w);

  std::size_t predicted_size = lm.tables_[0].size() - 1;  // minus the start marker

  for (int n = 2; n <= order; ++n) {
    // group continuations per context
    std::map<std::string, std::vector<std::pair<std::string, int64_t>>> by_context;
    GoodTuring gt;
    for (const auto& [key, c] : counts[n - 1]) {
      std::size_t cut = key.rfind(' ');
      by_context[key.substr(0, cut)].push_back({key.substr(cut + 1), c});
      gt.observe(c);
    }

    for (const auto& [ctx, cont] : by_context) {
      int64_t ctx_total = 0;
      for (const auto& [w, c] : cont) ctx_total += c;

      bool full_coverage = cont.size() >= predicted_size;
      double prob_sum = 0.0;
      std::vector<double> probs(cont.size());
      for (std::size_t k = 0; k < cont.size(); ++k) {
        double num = full_coverage ? static_cast<double>(cont[k].second)
                                   : discounted(gt, cont[k].second);
        probs[k] = num / static_cast<double>(ctx_total);
        prob_sum += probs[k];
      }

      double backoff_log10 = 0.0;
      bool has_backoff = false;
      if (!full_coverage) {
        double leftover = 1.0 - prob_sum;
        if (leftover < kMinLeftover) {
          leftover = kMinLeftover;
          double scale = (1.0 - leftover) / prob_sum;
          for (auto& p : probs) p *= scale;
          prob_sum = 1.0 - leftover;
        }
        std::vector<std::string> ctx_tokens = split_ws(ctx);
        std::vector<std::string> back_ctx(ctx_tokens.begin() + 1, ctx_tokens.end());
        double seen_lower = 0.0;
        for (const auto& [w, c] : cont)
          seen_lower += std::pow(10.0, lm.cond_log10(back_ctx, w));
        double denom = 1.0 - seen_lower;
        if (denom > 1e-12) {
          backoff_log10 = std::log10(leftover / denom);
          has_backoff = true;
        }
      }

      for (std::size_t k = 0; k < cont.size(); ++k)
        lm.tables_[n - 1][ctx + " " + cont[k].first] = {std::log10(probs[k]), 0.0,
                                                        false};
      auto it = lm.tables_[n - 2].find(ctx);
      if (it == lm.tables_[n - 2].end())
        throw data_error("lm training: context without entry: " + ctx);
      it->second.backoff = backoff_log10;
      it->second.has_backoff = has_backoff;
    }
  }
  return lm;
}

const NGramLM::Entry* NGramLM::find(const std::string& key, int order) const {
  if (order < 1 || order > order_) return nullptr;
  auto it = tables_[order - 1].find(key);
  return it == tables_[order - 1].end() ? nullptr : &it->second;
}

double NGramLM::cond_log10(const std::vector<std::string>& context,
                           const std::string& word) const {
  std::vector<std::string> ctx;
  std::size_t start = context.size() > static_cast<std::size_t>(order_ - 1)
                          ? context.size() - (order_ - 1)
                          : 0;
  for (std::size_t k = start; k < context.size(); ++k)
    ctx.push_back(in_vocab(context[k]) ? context[k] : kUnknown);
  std::string w = in_vocab(word) ? word : kUnknown;

  double backoff_acc = 0.0;
  while (true) {
    std::string key = ctx.empty() ? w : join_key(ctx) + " " + w;
    const Entry* e = find(key, static_cast<int>(ctx.size()) + 1);
    if (e) return backoff_acc + e->logprob;
    if (ctx.empty()) return backoff_acc + kStartLogProb;  // unreachable for mapped words
    const Entry* c = find(join_key(ctx), static_cast<int>(ctx.size()));
    if (c && c->has_backoff) backoff_acc += c->backoff;
    ctx.erase(ctx.begin());
  }
}

double NGramLM::score_log10(const Sentence& s) const {
  State state = begin_state();
  double total = 0.0;
  for (const auto& w : s) {
    auto [lp, next] = state_score(state, w);
    total += lp;
    state = std::move(next);
  }
  return total + end_score(state);
}

std::pair<double, NGramLM::State> NGramLM::state_score(const State& state,
                                                       const std::string& word) const {
  double lp = cond_log10(state.context, word);
  State next = state;
  next.context.push_back(in_vocab(word) ? word : kUnknown);
  std::size_t keep = static_cast<std::size_t>(std::max(order_ - 1, 0));
  while (next.context.size() > keep) next.context.erase(next.context.begin());
  return {lp, std::move(next)};
}

double NGramLM::end_score(const State& state) const {
  return cond_log10(state.context, kSentEnd);
}

double NGramLM::perplexity(const std::vector<Sentence>& corpus) const {
  double total = 0.0;
  long events = 0;
  for (const auto& s : corpus) {
    total += score_log10(s);
    events += static_cast<long>(s.size()) + 1;
  }
  if (events == 0) return 0.0;
  return std::pow(10.0, -total / static_cast<double>(events));
}

std::vector<std::string> NGramLM::predicted_vocab() const {
  std::vector<std::string> out;
  for (const auto& [w, e] : tables_[0])
    if (w != kSentStart) out.push_back(w);
  return out;
}

void NGramLM::save_arpa(const std::string& path) const {
  std::string data = "\\data\\\n";
  for (int n = 1; n <= order_; ++n)
    data += "ngram " + std::to_string(n) + "=" +
            std::to_string(tables_[n - 1].size()) + "\n";
  for (int n = 1; n <= order_; ++n) {
    data += "\n\\" + std::to_string(n) + "-grams:\n";
    for (const auto& [key, e] : tables_[n - 1]) {
      data += fmt7(e.logprob) + "\t" + key;
      if (e.has_backoff) data += "\t" + fmt7(e.backoff);
      data += "\n";
    }
  }
  data += "\n\\end\\\n";
  write_file(path, data);
}

NGramLM NGramLM::load_arpa(const std::string& path) {
  NGramLM lm;
  auto lines = read_lines(path);
  std::size_t i = 0;
  while (i < lines.size() && lines[i] != "\\data\\") ++i;
  if (i == lines.size()) throw data_error(path + ": missing \\data\\ header");
  ++i;
  std::vector<std::size_t> expected;
  while (i < lines.size() && lines[i].rfind("ngram ", 0) == 0) {
    std::size_t eq = lines[i].find('=');
    expected.push_back(std::stoul(lines[i].substr(eq + 1)));
    ++i;
  }
  lm.order_ = static_cast<int>(expected.size());
  if (lm.order_ < 1) throw data_error(path + ": no ngram counts in header");
  lm.tables_.resize(lm.order_);

  int current = 0;
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (line == "\\end\\") break;
    if (line[0] == '\\' && line.back() == ':') {
      current = std::stoi(line.substr(1));
      continue;
    }
    if (current < 1 || current > lm.order_)
      throw data_error(path + " line " + std::to_string(i + 1) + ": entry outside section");
    auto fields = split_on(line, "\t");
    if (fields.size() < 2 || fields.size() > 3)
      throw data_error(path + " line " + std::to_string(i + 1) + ": bad entry");
    Entry e;
    e.logprob = std::stod(fields[0]);
    if (fields.size() == 3) {
      e.backoff = std::stod(fields[2]);
      e.has_backoff = true;
    }
    lm.tables_[current - 1][fields[1]] = e;
  }
  for (int n = 1; n <= lm.order_; ++n)
    if (lm.tables_[n - 1].size() != expected[n - 1])
      throw data_error(path + ": ngram " + std::to_string(n) + " count mismatch");
  for (const auto& [w, e] : lm.tables_[0]) lm.vocab_.insert(w);
  return lm;
}

}  // namespace sape
