#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpb/maps.hpp"
#include "cpb/ring.hpp"

namespace cpb {

// Element ids are canonical per family:
//   zmod n            residue
//   field p k         sum c_i p^i for the polynomial residue sum c_i x^i
//   product R1 R2     a + |R1| * b
//   tuple families    little-endian mixed radix, first parameter least significant

RingPtr make_zmod(unsigned n, std::size_t order_cap = kDefaultOrderCap);

/// GF(p^k) as Z_p[x]/(f) with f the smallest monic irreducible of degree k,
/// where candidates are ordered by sum c_i p^i over their lower coefficients.
RingPtr make_field(unsigned p, unsigned k, std::size_t order_cap = kDefaultOrderCap);
/// Lower coefficients c_0..c_{k-1} of the modulus chosen by make_field.
std::vector<unsigned> field_modulus(unsigned p, unsigned k);

RingPtr make_product(const FiniteRing& r1, const FiniteRing& r2, std::size_t order_cap = kDefaultOrderCap);
/// Full matrix ring M_n(R), entries row-major.
RingPtr make_matrix(const FiniteRing& r, unsigned n, std::size_t order_cap = kDefaultOrderCap);
/// Upper triangular n x n matrices, entries (i <= j) row-major.
RingPtr make_upper_triangular(const FiniteRing& r, unsigned n, std::size_t order_cap = kDefaultOrderCap);
/// R / I with each coset represented by its smallest id; new ids follow the
/// order of those representatives. Throws PreconditionError unless I is a
/// two-sided ideal.
RingPtr make_quotient(const FiniteRing& r, const ElementSet& ideal, std::size_t order_cap = kDefaultOrderCap);

enum class TriangularFamily {
  kFullUpper,          // T_n(R, sigma)
  kConstantMainDiag,   // S(R, n, sigma)
  kConstantDiagonals,  // T(R, n, sigma), isomorphic to R[x; sigma]/(x^n)
  kA,                  // A(R, n, sigma)
  kB,                  // B(R, n, sigma), n = 2k >= 4
};

std::string family_tag(TriangularFamily f);  // "Tn", "S", "T", "A", "B"
std::optional<TriangularFamily> family_from_tag(const std::string& tag);

struct SkewTriangularSpec {
  RingMorphism sigma;  // carries the base ring
  unsigned n = 2;
  TriangularFamily family = TriangularFamily::kFullUpper;
};

/// A skew triangular matrix ring with product c_ij = sum_{k=i..j} a_ik sigma^(k-i)(b_kj).
///
/// Each family is a parameter layout: parameter p fills a fixed set of matrix
/// positions, and ids encode the parameter tuple.
class SkewTriangular {
 public:
  static SkewTriangular build(const SkewTriangularSpec& spec, std::size_t order_cap = kDefaultOrderCap);

  const RingPtr& ring() const { return ring_; }
  const FiniteRing& base() const { return *spec_.sigma.ring(); }
  const RingMorphism& sigma() const { return spec_.sigma; }
  unsigned n() const { return spec_.n; }
  TriangularFamily family() const { return spec_.family; }
  std::size_t parameter_count() const { return positions_.size(); }

  std::vector<Elem> parameters(Elem id) const;
  Elem from_parameters(std::span<const Elem> params) const;

  /// n*n row-major entries; zero below the diagonal.
  std::vector<Elem> matrix_of(Elem id) const;
  /// Inverse of matrix_of; nullopt when the matrix is not in the family.
  std::optional<Elem> from_matrix(std::span<const Elem> entries) const;

  /// For the constant-diagonals family: coefficients a_0..a_{n-1} of the
  /// image in R[x; sigma]/(x^n). Throws PreconditionError for other families.
  std::vector<Elem> coefficients(Elem id) const;
  Elem from_coefficients(std::span<const Elem> coeffs) const;

 private:
  explicit SkewTriangular(SkewTriangularSpec spec) : spec_(std::move(spec)) {}

  SkewTriangularSpec spec_;
  std::vector<std::vector<std::pair<unsigned, unsigned>>> positions_;
  RingPtr ring_;
};

/// Ordinary or skew product of two n x n matrices given row-major.
std::vector<Elem> skew_matrix_product(const FiniteRing& base, const RingMorphism* sigma, unsigned n,
                                      std::span<const Elem> a, std::span<const Elem> b);

/// The ring F*1 + (direct sum over Z of copies of F) with the shift
/// endomorphism. Elements are exact; the ring is infinite and is not a
/// FiniteRing.
class ShiftRing {
 public:
  struct Element {
    Elem scalar = 0;
    std::map<long, Elem> support;  // nonzero entries only

    friend bool operator==(const Element&, const Element&) = default;
    friend auto operator<=>(const Element&, const Element&) = default;
  };

  explicit ShiftRing(RingPtr field);

  const FiniteRing& field() const { return *field_; }

  Element zero() const { return {field_->zero(), {}}; }
  Element one() const { return {field_->one(), {}}; }
  Element scalar(Elem lambda) const { return {lambda, {}}; }
  /// lambda at position i, zero elsewhere.
  Element unit_vector(long i, Elem lambda) const;

  Element add(const Element& x, const Element& y) const;
  Element neg(const Element& x) const;
  /// (l, s)(m, t) = (lm, i -> l t(i) + s(i) m + s(i) t(i)).
  Element mul(const Element& x, const Element& y) const;
  /// The shift: position i of the image holds position i+1 of the input.
  Element alpha(const Element& x) const;
  bool is_zero(const Element& x) const;

  std::string describe(const Element& x) const;

 private:
  Element normalize(Element x) const;
  RingPtr field_;
};

}  // namespace cpb
