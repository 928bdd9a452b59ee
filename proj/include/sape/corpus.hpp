#pragma once

#include <map>
#include <string>
#include <vector>

#include "sape/util.hpp"

namespace sape {

// A sentence is an ordered list of whitespace-free tokens.
using Sentence = std::vector<std::string>;

struct TaggedSentence {
  Sentence tokens;
  std::vector<std::string> tags;  // one tag per token
};

struct Triplet {
  Sentence source;
  Sentence mt;
  Sentence pe;
};
using TripletCorpus = std::vector<Triplet>;

// Whitespace split plus detaching of leading/trailing punctuation
// (.,:;!?¿¡"() ) into separate tokens. Idempotent on its own output.
Sentence tokenize(const std::string& raw_line);

Sentence lowercase(const Sentence& s);

// Adjacent tag pairs rendered as "TAG1-TAG2"; length max(0, n-1).
std::vector<std::string> to_bigrams(const TaggedSentence& t);

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::string tag(const std::string& token) const = 0;
};

// Lexicon lookup (token -> most frequent tag) with a small rule fallback:
// numerals tag CARD, "." tags FS, ":" tags COLON; anything else gets the
// open-class default NC.
class LexiconTagger : public Tagger {
 public:
  LexiconTagger() = default;

  // One "token<TAB>TAG" entry per line; repeated entries accumulate counts.
  static LexiconTagger from_file(const std::string& path);

  void add(const std::string& token, const std::string& tag);
  std::string tag(const std::string& token) const override;

 private:
  std::map<std::string, std::map<std::string, int>> counts_;
};

TaggedSentence pos_tag(const Sentence& s, const Tagger& tagger);

// One sentence per line, tokens space-separated. Rejects malformed UTF-8
// with the offending line number.
std::vector<Sentence> load_sentences(const std::string& path);
void save_sentences(const std::string& path, const std::vector<Sentence>& sents);

// Line i of each file forms entry i; line counts must agree.
TripletCorpus load_triplets(const std::string& src_path, const std::string& mt_path,
                            const std::string& pe_path);

// "token/TAG" pairs, space-separated.
void save_tagged(const std::string& path, const std::vector<TaggedSentence>& sents);
std::vector<TaggedSentence> load_tagged(const std::string& path);

}  // namespace sape
