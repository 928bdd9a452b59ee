#include "sape/edit_aligner.hpp"

// Porter's 1980 suffix-stripping algorithm, steps 1a through 5b.

namespace sape {

namespace {

bool is_consonant(const std::string& w, std::size_t i) {
  char c = w[i];
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in [C](VC)^m[V].
int measure(const std::string& w, std::size_t len) {
  int m = 0;
  std::size_t i = 0;
  while (i < len && is_consonant(w, i)) ++i;
  while (i < len) {
    while (i < len && !is_consonant(w, i)) ++i;
    if (i >= len) break;
    ++m;
    while (i < len && is_consonant(w, i)) ++i;
  }
  return m;
}

bool has_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (!is_consonant(w, i)) return true;
  return false;
}

bool double_consonant(const std::string& w, std::size_t len) {
  if (len < 2) return false;
  return w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
}

// consonant-vowel-consonant ending where the final consonant is not w, x or y
bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1))
    return false;
  char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const char* suffix) {
  std::size_t n = std::char_traits<char>::length(suffix);
  return w.size() >= n && w.compare(w.size() - n, n, suffix) == 0;
}

}  // namespace

std::string porter_stem(const std::string& word) {
  std::string w = word;
  if (w.size() <= 2) return w;

  // step 1a
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // keep
  } else if (ends_with(w, "s")) {
    w.resize(w.size() - 1);
  }

  // step 1b
  bool cleanup = false;
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.resize(w.size() - 1);
  } else if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
    w.resize(w.size() - 2);
    cleanup = true;
  } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
    w.resize(w.size() - 3);
    cleanup = true;
  }
  if (cleanup) {
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += 'e';
    } else if (double_consonant(w, w.size()) && !ends_with(w, "l") &&
               !ends_with(w, "s") && !ends_with(w, "z")) {
      w.resize(w.size() - 1);
    } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
      w += 'e';
    }
  }

  // step 1c
  if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w[w.size() - 1] = 'i';

  // step 2: pairs keyed on the penultimate letter of the suffix
  static const struct { const char* from; const char* to; } step2[] = {
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
      {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
      {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"}};
  for (const auto& rule : step2) {
    if (ends_with(w, rule.from)) {
      std::size_t stem_len = w.size() - std::char_traits<char>::length(rule.from);
      if (measure(w, stem_len) > 0) {
        w.resize(stem_len);
        w += rule.to;
      }
      break;
    }
  }

  // step 3
  static const struct { const char* from; const char* to; } step3[] = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
  for (const auto& rule : step3) {
    if (ends_with(w, rule.from)) {
      std::size_t stem_len = w.size() - std::char_traits<char>::length(rule.from);
      if (measure(w, stem_len) > 0) {
        w.resize(stem_len);
        w += rule.to;
      }
      break;
    }
  }

  // step 4: drop the suffix when measure of the stem exceeds 1
  static const char* step4[] = {"al",  "ance", "ence", "er",   "ic",  "able",
                                "ible", "ant",  "ement", "ment", "ent", "ion",
                                "ou",  "ism",  "ate",  "iti",  "ous", "ive", "ize"};
  for (const char* suffix : step4) {
    if (ends_with(w, suffix)) {
      std::size_t stem_len = w.size() - std::char_traits<char>::length(suffix);
      bool ok = measure(w, stem_len) > 1;
      if (ok && std::string(suffix) == "ion")
        ok = stem_len > 0 && (w[stem_len - 1] == 's' || w[stem_len - 1] == 't');
      if (ok) w.resize(stem_len);
      break;
    }
  }

  // step 5a
  if (ends_with(w, "e")) {
    int m = measure(w, w.size() - 1);
    if (m > 1 || (m == 1 && !ends_cvc(w, w.size() - 1))) w.resize(w.size() - 1);
  }

  // step 5b
  if (measure(w, w.size()) > 1 && double_consonant(w, w.size()) && ends_with(w, "l"))
    w.resize(w.size() - 1);

  return w;
}

}  // namespace sape
