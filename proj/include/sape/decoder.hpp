#pragma once

#include <array>
#include <string>
#include <vector>

#include "sape/corpus.hpp"
#include "sape/ngram_lm.hpp"
#include "sape/rule_extract.hpp"

namespace sape {

constexpr int kNumFeatures = 8;

// Log-linear weights over the five rule features plus the glue, language
// model and word-penalty components.
struct WeightVector {
  double p_mt_given_pe = 1.0;
  double p_pe_given_mt = 1.0;
  double lex_mt_given_pe = 1.0;
  double lex_pe_given_mt = 1.0;
  double phrase_penalty = 1.0;
  double glue = 1.0;
  double lm = 1.0;
  double word_penalty = 0.5;

  std::array<double, kNumFeatures> as_array() const;
  static WeightVector from_array(const std::array<double, kNumFeatures>& a);
  static const std::array<std::string, kNumFeatures>& feature_names();

  // "feature_name<TAB>value" lines
  void save(const std::string& path) const;
  static WeightVector load(const std::string& path);
};

// Weighted log score of one rule application over its five features.
double rule_weight(const SCFGRule& rule, const WeightVector& w);

// Log cost of one block-concatenation glue application; block promotion is
// free.
double glue_weight(const WeightVector& w);

enum class StepKind { rule, pass_through, glue_promote, glue_concat };

struct DerivationStep {
  StepKind kind = StepKind::rule;
  const SCFGRule* rule = nullptr;  // for StepKind::rule; owned by the grammar
  int begin = 0;                   // input span, half-open
  int end = 0;
};

struct Derivation {
  Sentence output;
  double score = 0.0;
  std::array<double, kNumFeatures> features{};  // h with score = w . h
  std::vector<DerivationStep> steps;
};

struct DecoderParams {
  int search_depth = 7;  // rule applications limited to spans of this width
  int beam = 100;        // items kept per span and symbol; 0 = unlimited
};

// CKY chart decoder over the rule grammar with monotone glue combination,
// full language-model state in the items, and per-span histogram pruning.
// Every input token also has a pass-through copy rule with all five
// features e^-1, so any input is derivable.
class Decoder {
 public:
  Decoder(const RuleTable& grammar, const NGramLM& lm, const WeightVector& w,
          const DecoderParams& params = {});

  Derivation decode(const Sentence& input) const;

  // Top-k derivations with distinct outputs, best first; ties on score go
  // to the lexicographically smaller output string.
  std::vector<Derivation> kbest(const Sentence& input, int k) const;

  const WeightVector& weights() const { return weights_; }

  struct Chart;  // opaque; defined with the implementation

 private:
  void build_chart(const Sentence& input, Chart* chart) const;
  Derivation materialize(const Chart& chart, int item_id, int rank) const;

  const RuleTable& grammar_;
  const NGramLM& lm_;
  WeightVector weights_;
  DecoderParams params_;
  std::map<std::string, std::vector<const SCFGRule*>> rules_by_first_token_;
  std::vector<const SCFGRule*> rules_nt_first_;
};

}  // namespace sape
