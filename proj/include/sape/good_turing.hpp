#pragma once

#include <cstdint>
#include <map>

namespace sape {

// Good-Turing adjusted counts from count-of-count statistics:
// c* = (c+1) * N_{c+1} / N_c where N_{c+1} > 0, otherwise c stands.
class GoodTuring {
 public:
  GoodTuring() = default;
  explicit GoodTuring(std::map<int64_t, int64_t> count_of_counts)
      : n_(std::move(count_of_counts)) {}

  void observe(int64_t count) { n_[count] += 1; }

  double adjusted(int64_t c) const {
    auto nc = n_.find(c);
    auto nc1 = n_.find(c + 1);
    if (nc == n_.end() || nc->second == 0 || nc1 == n_.end() || nc1->second == 0)
      return static_cast<double>(c);
    return static_cast<double>(c + 1) * static_cast<double>(nc1->second) /
           static_cast<double>(nc->second);
  }

  int64_t count_of_count(int64_t c) const {
    auto it = n_.find(c);
    return it == n_.end() ? 0 : it->second;
  }

 private:
  std::map<int64_t, int64_t> n_;
};

}  // namespace sape
