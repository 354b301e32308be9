#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpb/ring.hpp"

namespace cpb {

enum class Verdict { kFalse, kTrue, kSkipped };

std::string to_string(Verdict v);

/// Fixed flag order used by reports and the mining predicate language.
const std::vector<std::string>& flag_names();

enum class Side { kLeft, kRight };

/// {e : e*e = e}.
ElementSet idempotents(const FiniteRing& ring);
/// Left semicentral: r*e = e*r*e for all r. Right semicentral: e*r = e*r*e.
ElementSet semicentral_idempotents(const FiniteRing& ring, Side side);
ElementSet central_idempotents(const FiniteRing& ring);

/// Jacobson radical {a : 1 - r*a is a unit for every r}. On a finite ring
/// it is the prime radical (the largest nilpotent ideal). Throws
/// ContractViolation if the result is not a nilpotent two-sided ideal.
ElementSet prime_radical(const FiniteRing& ring);

bool is_semiprime(const FiniteRing& ring);
/// a*R*b != 0 for all nonzero a, b.
bool is_prime(const FiniteRing& ring);

struct CpBaerResult {
  bool holds = true;
  std::map<Elem, Elem> witness;  // e -> first idempotent c with r(eR) = cR
  std::optional<Elem> failing;   // first idempotent e without a witness
};

/// r(eR) = cR for every idempotent e, with c found by scanning idempotents in id order.
CpBaerResult right_cp_baer(const FiniteRing& ring);

struct IExtendingWitness {
  Elem c = 0;
  std::size_t checked = 0;  // nonzero m in cR for which mR meets ReR
};

struct IExtendingResult {
  bool holds = true;
  std::map<Elem, IExtendingWitness> witness;
  std::optional<Elem> failing;
};

/// For every idempotent e some idempotent c has ReR contained and essential in cR.
IExtendingResult right_I_extending(const FiniteRing& ring);

struct ClassifyOptions {
  std::size_t order_cap = 1024;      // above this only the cheap flags are computed
  std::size_t lattice_cap = 1 << 16;  // max members of an annihilator intersection closure
};

struct PropertyReport {
  std::string ring_id;
  std::size_t order = 0;
  bool partial = false;
  std::vector<Elem> idempotents;
  std::vector<Elem> left_semicentral;
  std::vector<Elem> right_semicentral;
  std::vector<Elem> central;
  std::vector<Elem> radical;
  std::map<std::string, Verdict> flags;
  std::map<Elem, Elem> cp_witness;
  std::map<Elem, IExtendingWitness> i_ext_witness;
  std::map<std::string, std::vector<Elem>> counterexamples;

  Verdict flag(const std::string& name) const;
  friend bool operator==(const PropertyReport&, const PropertyReport&);
};

inline bool operator==(const IExtendingWitness& a, const IExtendingWitness& b) {
  return a.c == b.c && a.checked == b.checked;
}

PropertyReport classify(const FiniteRing& ring, const ClassifyOptions& options = {});

/// Implications that must hold inside one report. Returns one line per violation.
std::vector<std::string> report_invariant_violations(const PropertyReport& report);

struct CpEquivalence {
  // Items: (1) annihilators of the cyclic projectives eR, (2) r(ReR) = r(eR) = cR,
  // (3) r(eR) = r(f) for a right semicentral idempotent f, (4) annihilators of
  // finite sums of idempotent-generated right ideals.
  std::array<Verdict, 4> items{Verdict::kSkipped, Verdict::kSkipped, Verdict::kSkipped, Verdict::kSkipped};
  bool agree = true;
  std::string diagnostic;
};

/// Evaluates the four characterizations independently of right_cp_baer.
/// `sum_cap` bounds the number of distinct sums enumerated for item (4).
CpEquivalence cp_baer_equivalences(const FiniteRing& ring, std::size_t sum_cap = 1 << 14);

}  // namespace cpb
