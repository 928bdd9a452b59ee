#include "sape/stat_aligner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sape {

namespace {
constexpr double kRealProbFloor = 1e-4;
}

double TranslationTable::prob(const std::string& src, const std::string& tgt) const {
  auto row = rows_.find(src);
  if (row == rows_.end()) return 0.0;
  auto cell = row->second.find(tgt);
  return cell == row->second.end() ? 0.0 : cell->second;
}

void TranslationTable::set(const std::string& src, const std::string& tgt, double p) {
  rows_[src][tgt] = p;
}

void TranslationTable::save(const std::string& path) const {
  std::vector<std::string> lines;
  char buf[64];
  for (const auto& [src, row] : rows_) {
    for (const auto& [tgt, p] : row) {
      std::snprintf(buf, sizeof(buf), "%.10g", p);
      lines.push_back(src + "\t" + tgt + "\t" + buf);
    }
  }
  write_lines(path, lines);
}

TranslationTable TranslationTable::load(const std::string& path) {
  TranslationTable tt;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_on(line, "\t");
    if (fields.size() != 3)
      throw data_error(path + " line " + std::to_string(lineno) +
                       ": expected src<TAB>tgt<TAB>prob");
    tt.set(fields[0], fields[1], std::stod(fields[2]));
  }
  return tt;
}

DirectionalAlignment flip(const DirectionalAlignment& a) {
  DirectionalAlignment out;
  out.direction = a.direction == DirectionalAlignment::Direction::forward
                      ? DirectionalAlignment::Direction::reverse
                      : DirectionalAlignment::Direction::forward;
  out.links.reserve(a.links.size());
  for (const auto& l : a.links) out.links.push_back({l.j, l.i, l.stage});
  std::sort(out.links.begin(), out.links.end());
  return out;
}

TranslationTable train_em(const std::vector<std::pair<Sentence, Sentence>>& corpus,
                          int iterations) {
  if (corpus.empty()) throw data_error("train_em: empty corpus");
  if (iterations < 1) throw data_error("train_em: iterations must be >= 1");

  // uniform initialization over co-occurring pairs
  std::map<std::string, std::map<std::string, double>> t;
  for (const auto& [src, tgt] : corpus) {
    for (const auto& w : tgt) {
      t[TranslationTable::kNullToken][w] = 1.0;
      for (const auto& s : src) t[s][w] = 1.0;
    }
  }
  for (auto& [src, row] : t) {
    double norm = 1.0 / static_cast<double>(row.size());
    for (auto& [tgt, p] : row) p = norm;
  }

  auto lookup = [](const std::map<std::string, std::map<std::string, double>>& table,
                   const std::string& src, const std::string& tgt) {
    auto row = table.find(src);
    if (row == table.end()) return 0.0;
    auto cell = row->second.find(tgt);
    return cell == row->second.end() ? 0.0 : cell->second;
  };

  for (int iter = 0; iter < iterations; ++iter) {
    std::map<std::string, std::map<std::string, double>> counts;
    for (const auto& [src, tgt] : corpus) {
      static const std::string null_token = TranslationTable::kNullToken;
      std::vector<const std::string*> ext;
      ext.push_back(&null_token);
      for (const auto& s : src) ext.push_back(&s);
      for (const auto& w : tgt) {
        double denom = 0.0;
        for (const auto* s : ext) denom += lookup(t, *s, w);
        if (denom <= 0.0) continue;
        for (const auto* s : ext) counts[*s][w] += lookup(t, *s, w) / denom;
      }
    }
    for (auto& [src, row] : counts) {
      double total = 0.0;
      for (const auto& [tgt, c] : row) total += c;
      if (total <= 0.0) continue;
      for (auto& [tgt, c] : row) c /= total;
    }
    t = std::move(counts);
  }

  TranslationTable tt;
  for (const auto& [src, row] : t)
    for (const auto& [tgt, p] : row)
      if (p > 0.0) tt.set(src, tgt, p);
  return tt;
}

double corpus_log_likelihood(const TranslationTable& tt,
                             const std::vector<std::pair<Sentence, Sentence>>& corpus) {
  double ll = 0.0;
  for (const auto& [src, tgt] : corpus) {
    double position_prob = 1.0 / static_cast<double>(src.size() + 1);
    for (const auto& w : tgt) {
      double p = tt.prob(TranslationTable::kNullToken, w);
      for (const auto& s : src) p += tt.prob(s, w);
      ll += std::log(std::max(p * position_prob, 1e-300));
    }
  }
  return ll;
}

DirectionalAlignment viterbi_align(const TranslationTable& tt, const Sentence& src,
                                   const Sentence& tgt) {
  DirectionalAlignment out;
  for (int j = 0; j < static_cast<int>(tgt.size()); ++j) {
    double null_p = tt.prob(TranslationTable::kNullToken, tgt[j]);
    double best_p = -1.0;
    int best_i = -1;
    for (int i = 0; i < static_cast<int>(src.size()); ++i) {
      double p = std::max(tt.prob(src[i], tgt[j]), kRealProbFloor);
      if (p > best_p) {
        best_p = p;
        best_i = i;
      }
    }
    if (best_i >= 0 && best_p >= null_p)
      out.links.push_back({best_i, j, MatchStage::none});
  }
  std::sort(out.links.begin(), out.links.end());
  return out;
}

Alignment gdfa(const DirectionalAlignment& fwd, const DirectionalAlignment& rev) {
  std::vector<Link> uni;
  Alignment result;
  for (const auto& l : fwd.links) {
    uni.push_back(l);
    if (std::binary_search(rev.links.begin(), rev.links.end(), l)) result.add(l);
  }
  for (const auto& l : rev.links)
    if (!std::binary_search(fwd.links.begin(), fwd.links.end(), l)) uni.push_back(l);
  std::sort(uni.begin(), uni.end());

  auto covered_i = [&](int i) { return result.covers_i(i); };
  auto covered_j = [&](int j) { return result.covers_j(j); };
  auto neighbor_aligned = [&](int i, int j) {
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        if (result.has(i + di, j + dj)) return true;
      }
    return false;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& l : uni) {
      if (result.has(l.i, l.j)) continue;
      if (covered_i(l.i) && covered_j(l.j)) continue;
      if (!neighbor_aligned(l.i, l.j)) continue;
      result.add(l);
      changed = true;
    }
  }

  // final-and: union links with both endpoints still uncovered
  for (const auto& l : uni) {
    if (result.has(l.i, l.j)) continue;
    if (!covered_i(l.i) && !covered_j(l.j)) result.add(l);
  }
  return result;
}

}  // namespace sape
