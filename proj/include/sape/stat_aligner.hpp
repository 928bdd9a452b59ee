#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sape/edit_aligner.hpp"

namespace sape {

// Word translation probabilities t(target | source). Rows are normalized
// over the targets observed with each source token. The reserved source
// token kNullToken stands for the empty source position.
class TranslationTable {
 public:
  static constexpr const char* kNullToken = "<null>";

  double prob(const std::string& src, const std::string& tgt) const;
  void set(const std::string& src, const std::string& tgt, double p);
  const std::map<std::string, std::map<std::string, double>>& rows() const {
    return rows_;
  }

  // "src<TAB>tgt<TAB>prob" lines, sorted, 10 significant digits.
  void save(const std::string& path) const;
  static TranslationTable load(const std::string& path);

 private:
  std::map<std::string, std::map<std::string, double>> rows_;
};

struct DirectionalAlignment {
  enum class Direction { forward, reverse };
  std::vector<Link> links;  // sorted (i, j); i = source position, j = target position
  Direction direction = Direction::forward;
};

// Swap the two sides of every link (used to bring a reverse-trained
// alignment into forward coordinates).
DirectionalAlignment flip(const DirectionalAlignment& a);

// IBM Model 1 expectation maximization with a null source token prepended
// to every source sentence; rows initialized uniformly over co-occurring
// pairs and renormalized every iteration.
TranslationTable train_em(const std::vector<std::pair<Sentence, Sentence>>& corpus,
                          int iterations);

// Model 1 corpus log-likelihood (natural log), including the uniform
// position factor. Non-decreasing across EM iterations.
double corpus_log_likelihood(const TranslationTable& tt,
                             const std::vector<std::pair<Sentence, Sentence>>& corpus);

// Each target position links to the best source position, or to no
// position when the trained null probability beats every real one. Real
// positions compete with a probability floor of 1e-4; ties go to the
// smallest source index, and a real position wins a tie against null.
DirectionalAlignment viterbi_align(const TranslationTable& tt, const Sentence& src,
                                   const Sentence& tgt);

// Grow-diag-final-and symmetrization over the Moore 8-neighborhood.
// Result contains the intersection and is contained in the union.
Alignment gdfa(const DirectionalAlignment& fwd, const DirectionalAlignment& rev);

}  // namespace sape
