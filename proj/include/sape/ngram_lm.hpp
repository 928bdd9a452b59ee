#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sape/corpus.hpp"

namespace sape {

// Katz back-off n-gram model with Good-Turing discounting of counts 1-5.
// Probabilities and back-off weights are stored in log10 (the ARPA
// convention); the unknown token absorbs the discounted unigram mass.
class NGramLM {
 public:
  static constexpr const char* kSentStart = "<s>";
  static constexpr const char* kSentEnd = "</s>";
  static constexpr const char* kUnknown = "<unk>";

  struct Entry {
    double logprob = 0.0;   // log10
    double backoff = 0.0;   // log10; meaningful iff has_backoff
    bool has_backoff = false;
  };

  static NGramLM train(const std::vector<Sentence>& corpus, int order);

  int order() const { return order_; }
  bool in_vocab(const std::string& token) const { return vocab_.count(token) > 0; }

  // log10 P(word | context); context longer than order-1 is truncated and
  // out-of-vocabulary tokens map to the unknown token.
  double cond_log10(const std::vector<std::string>& context,
                    const std::string& word) const;

  // log10 probability of the whole sentence including the end-of-sentence
  // event, with the start marker as initial context.
  double score_log10(const Sentence& s) const;

  // Incremental scoring; summing over a sentence reproduces score_log10.
  struct State {
    std::vector<std::string> context;
  };
  State begin_state() const { return {{kSentStart}}; }
  std::pair<double, State> state_score(const State& state,
                                       const std::string& word) const;
  double end_score(const State& state) const;

  // 10^(-logP / events); events include one end marker per sentence.
  double perplexity(const std::vector<Sentence>& corpus) const;

  // Every token type the model can predict (vocabulary without the start
  // marker, plus the end and unknown markers).
  std::vector<std::string> predicted_vocab() const;

  void save_arpa(const std::string& path) const;
  static NGramLM load_arpa(const std::string& path);

  const std::map<std::string, Entry>& entries(int order) const {
    return tables_[order - 1];
  }

 private:
  NGramLM() = default;
  const Entry* find(const std::string& key, int order) const;

  int order_ = 0;
  std::vector<std::map<std::string, Entry>> tables_;  // index = order - 1
  std::set<std::string> vocab_;                        // unigram types
};

}  // namespace sape
