#include "sape/corpus.hpp"

#include <algorithm>
#include <deque>

namespace sape {

namespace {

bool is_detachable_punct(uint32_t cp) {
  switch (cp) {
    case '.': case ',': case ':': case ';': case '!': case '?':
    case 0xBF:   // inverted question mark
    case 0xA1:   // inverted exclamation mark
    case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

bool is_numeral(const std::string& token) {
  if (token.empty()) return false;
  bool digit_seen = false;
  for (char c : token) {
    if (c >= '0' && c <= '9') { digit_seen = true; continue; }
    if (c == '.' || c == ',') continue;
    return false;
  }
  return digit_seen;
}

}  // namespace

Sentence tokenize(const std::string& raw_line) {
  Sentence out;
  for (const auto& chunk : split_ws(raw_line)) {
    std::deque<uint32_t> cps;
    for (uint32_t cp : utf8_decode(chunk)) cps.push_back(cp);
    std::vector<uint32_t> front, back;
    while (cps.size() > 1 && is_detachable_punct(cps.front())) {
      front.push_back(cps.front());
      cps.pop_front();
    }
    while (cps.size() > 1 && is_detachable_punct(cps.back())) {
      back.push_back(cps.back());
      cps.pop_back();
    }
    for (uint32_t cp : front) out.push_back(utf8_encode({cp}));
    out.push_back(utf8_encode(std::vector<uint32_t>(cps.begin(), cps.end())));
    for (auto it = back.rbegin(); it != back.rend(); ++it)
      out.push_back(utf8_encode({*it}));
  }
  return out;
}

Sentence lowercase(const Sentence& s) {
  Sentence out;
  out.reserve(s.size());
  for (const auto& tok : s) out.push_back(lowercase_token(tok));
  return out;
}

std::vector<std::string> to_bigrams(const TaggedSentence& t) {
  std::vector<std::string> out;
  if (t.tags.size() < 2) return out;
  out.reserve(t.tags.size() - 1);
  for (std::size_t i = 0; i + 1 < t.tags.size(); ++i)
    out.push_back(t.tags[i] + "-" + t.tags[i + 1]);
  return out;
}

LexiconTagger LexiconTagger::from_file(const std::string& path) {
  LexiconTagger tagger;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw data_error("tagger lexicon " + path + " line " + std::to_string(lineno) +
                       ": expected token<TAB>TAG");
    tagger.add(line.substr(0, tab), line.substr(tab + 1));
  }
  return tagger;
}

void LexiconTagger::add(const std::string& token, const std::string& tag) {
  counts_[token][tag] += 1;
}

std::string LexiconTagger::tag(const std::string& token) const {
  auto it = counts_.find(token);
  if (it != counts_.end()) {
    int best = 0;
    std::string best_tag;
    for (const auto& [t, c] : it->second) {
      if (c > best) { best = c; best_tag = t; }
    }
    return best_tag;
  }
  if (token == ".") return "FS";
  if (token == ":") return "COLON";
  if (is_numeral(token)) return "CARD";
  return "NC";
}

TaggedSentence pos_tag(const Sentence& s, const Tagger& tagger) {
  TaggedSentence out;
  out.tokens = s;
  out.tags.reserve(s.size());
  for (const auto& tok : s) out.tags.push_back(tagger.tag(tok));
  return out;
}

std::vector<Sentence> load_sentences(const std::string& path) {
  std::vector<Sentence> sents;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    std::size_t bad = 0;
    if (!utf8_valid(line, &bad))
      throw data_error(path + " line " + std::to_string(lineno) +
                       ": malformed UTF-8 at byte " + std::to_string(bad));
    sents.push_back(split_ws(line));
  }
  return sents;
}

void save_sentences(const std::string& path, const std::vector<Sentence>& sents) {
  std::vector<std::string> lines;
  lines.reserve(sents.size());
  for (const auto& s : sents) lines.push_back(join(s));
  write_lines(path, lines);
}

TripletCorpus load_triplets(const std::string& src_path, const std::string& mt_path,
                            const std::string& pe_path) {
  auto src = load_sentences(src_path);
  auto mt = load_sentences(mt_path);
  auto pe = load_sentences(pe_path);
  if (mt.size() != src.size())
    throw data_error("line count mismatch: " + mt_path + " has " +
                     std::to_string(mt.size()) + " lines, " + src_path + " has " +
                     std::to_string(src.size()));
  if (pe.size() != src.size())
    throw data_error("line count mismatch: " + pe_path + " has " +
                     std::to_string(pe.size()) + " lines, " + src_path + " has " +
                     std::to_string(src.size()));
  TripletCorpus corpus;
  corpus.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i)
    corpus.push_back({std::move(src[i]), std::move(mt[i]), std::move(pe[i])});
  return corpus;
}

void save_tagged(const std::string& path, const std::vector<TaggedSentence>& sents) {
  std::vector<std::string> lines;
  lines.reserve(sents.size());
  for (const auto& s : sents) {
    std::vector<std::string> pairs;
    pairs.reserve(s.tokens.size());
    for (std::size_t i = 0; i < s.tokens.size(); ++i)
      pairs.push_back(s.tokens[i] + "/" + s.tags[i]);
    lines.push_back(join(pairs));
  }
  write_lines(path, lines);
}

std::vector<TaggedSentence> load_tagged(const std::string& path) {
  std::vector<TaggedSentence> sents;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    TaggedSentence ts;
    for (const auto& pair : split_ws(line)) {
      std::size_t slash = pair.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == pair.size())
        throw data_error(path + " line " + std::to_string(lineno) +
                         ": expected token/TAG, got '" + pair + "'");
      ts.tokens.push_back(pair.substr(0, slash));
      ts.tags.push_back(pair.substr(slash + 1));
    }
    sents.push_back(std::move(ts));
  }
  return sents;
}

}  // namespace sape
