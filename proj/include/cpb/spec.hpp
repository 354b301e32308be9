#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpb/constructors.hpp"
#include "cpb/maps.hpp"
#include "cpb/monoid.hpp"
#include "cpb/ring.hpp"

namespace cpb {

/// Input error with a 1-based line and column.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct MorphismExpr {
  enum class Kind { kIdentity, kFrobenius, kSwap, kTable, kExtend, kInverse };
  Kind kind = Kind::kIdentity;
  std::vector<Elem> table;                 // kTable
  std::shared_ptr<const MorphismExpr> inner;  // kExtend, kInverse
  std::size_t line = 1, column = 1;

  friend bool operator==(const MorphismExpr& a, const MorphismExpr& b);
};

struct RingExpr {
  enum class Kind { kZmod, kField, kProduct, kMatrix, kUpperTriangular, kSkewTriangular, kQuotient };
  Kind kind = Kind::kZmod;
  std::vector<unsigned> ints;  // zmod n | field p k | matrix n | upper_triangular n | skew_triangular n
  std::vector<std::shared_ptr<const RingExpr>> children;
  TriangularFamily family = TriangularFamily::kFullUpper;
  std::shared_ptr<const MorphismExpr> sigma;  // skew_triangular
  std::vector<Elem> ideal_generators;         // quotient
  std::size_t line = 1, column = 1;

  friend bool operator==(const RingExpr& a, const RingExpr& b);
};

struct DeltaExpr {
  enum class Kind { kZero, kInner, kTable };
  Kind kind = Kind::kZero;
  Elem element = 0;  // kInner
  std::vector<Elem> table;
  std::size_t line = 1, column = 1;

  friend bool operator==(const DeltaExpr&, const DeltaExpr&) = default;
};

struct MonoidExpr {
  bool rational = false;
  unsigned rank = 1;
  MonoidOrder order = MonoidOrder::kLex;
  std::vector<unsigned> box;                       // naturals
  std::vector<std::pair<std::int64_t, std::int64_t>> support;  // rationals, reduced

  friend bool operator==(const MonoidExpr&, const MonoidExpr&) = default;
};

/// A parsed spec: a ring expression plus optional extension data.
struct RingSpec {
  std::shared_ptr<const RingExpr> ring;
  std::shared_ptr<const MorphismExpr> alpha;  // null: identity
  std::optional<DeltaExpr> delta;             // none: zero
  std::optional<MonoidExpr> monoid;

  friend bool operator==(const RingSpec& a, const RingSpec& b);
};

/// Either a bare ring expression ("zmod 6") or key: value lines with keys
/// ring, alpha, delta, monoid. `#` starts a comment. Grammar in docs.
/// Throws SpecError.
RingSpec parse_spec(const std::string& text);

std::string serialize(const RingExpr& e);
std::string serialize(const MorphismExpr& m);
std::string serialize(const DeltaExpr& d);
std::string serialize(const MonoidExpr& m);
/// Canonical text: one `key: value` line per present field, in the order
/// ring, alpha, delta, monoid. A spec with only a ring serializes to the
/// bare expression.
std::string serialize(const RingSpec& spec);

/// A spec with every referenced object constructed and validated.
struct BuiltSpec {
  RingSpec spec;
  RingPtr ring;
  std::optional<SkewTriangular> triangular;  // when the top constructor is skew_triangular
  std::optional<RingMorphism> alpha;         // only when the spec names one
  std::optional<AlphaDerivation> delta;
  std::optional<MonoidContext> monoid;

  RingMorphism alpha_or_identity() const;
  AlphaDerivation delta_or_zero() const;
};

/// Throws SpecError (with the position of the offending expression) on
/// construction failures and failed morphism validation, CapExceeded when a
/// ring exceeds `order_cap`.
BuiltSpec build_spec(const RingSpec& spec, std::size_t order_cap = kDefaultOrderCap);

}  // namespace cpb
