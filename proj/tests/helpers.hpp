#pragma once

#include <random>
#include <string>
#include <vector>

#include "cpb/corpus.hpp"
#include "cpb/ring.hpp"
#include "cpb/spec.hpp"

namespace testing_support {

inline cpb::BuiltSpec built(const std::string& spec, std::size_t cap = cpb::kDefaultOrderCap) {
  return cpb::build_spec(cpb::parse_spec(spec), cap);
}

inline cpb::RingPtr ring(const std::string& spec, std::size_t cap = cpb::kDefaultOrderCap) {
  return built(spec, cap).ring;
}

/// Corpus rings up to a given order, built once per call.
inline std::vector<cpb::RingPtr> small_corpus(std::size_t max_order) {
  std::vector<cpb::RingPtr> out;
  for (const auto& s : cpb::corpus_ring_specs(max_order)) out.push_back(ring(s));
  return out;
}

inline std::vector<cpb::Elem> ids(std::initializer_list<int> v) {
  std::vector<cpb::Elem> out;
  for (int x : v) out.push_back(static_cast<cpb::Elem>(x));
  return out;
}

/// Uniform element of a ring.
inline cpb::Elem pick(std::mt19937_64& rng, const cpb::FiniteRing& r) {
  return static_cast<cpb::Elem>(std::uniform_int_distribution<std::size_t>(0, r.order() - 1)(rng));
}

/// Random subset, each element kept with probability 1/2.
inline cpb::ElementSet random_subset(std::mt19937_64& rng, const cpb::FiniteRing& r) {
  cpb::ElementSet s(r);
  for (std::size_t a = 0; a < r.order(); ++a)
    if (rng() & 1) s.insert(static_cast<cpb::Elem>(a));
  return s;
}

}  // namespace testing_support
