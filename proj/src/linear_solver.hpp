#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cpb/ring.hpp"

namespace cpb::detail {

// Preimages of y -> y - u*y - y*v, bucketed by value. Keyed by (u, v).
class LinearSolver {
 public:
  explicit LinearSolver(const FiniteRing& r) : r_(r) {}

  const std::vector<Elem>& solutions(Elem u, Elem v, Elem rhs) {
    auto key = std::pair{u, v};
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::vector<std::vector<Elem>> buckets(r_.order());
      for (std::size_t y = 0; y < r_.order(); ++y) {
        auto ey = static_cast<Elem>(y);
        Elem val = r_.sub(r_.sub(ey, r_.mul(u, ey)), r_.mul(ey, v));
        buckets[val].push_back(ey);
      }
      it = cache_.emplace(key, std::move(buckets)).first;
    }
    return it->second[rhs];
  }

 private:
  const FiniteRing& r_;
  std::map<std::pair<Elem, Elem>, std::vector<std::vector<Elem>>> cache_;
};

}  // namespace cpb::detail
