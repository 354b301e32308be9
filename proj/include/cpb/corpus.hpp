#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cpb {

/// Families accepted by `mine`: zmod, field, product, matrix,
/// upper_triangular, skew_triangular, corpus.
const std::vector<std::string>& mine_families();

/// Canonical specs of a family in a fixed enumeration order, keeping only
/// rings that build within `max_order`. Throws PreconditionError for an
/// unknown family.
std::vector<std::string> family_instances(const std::string& family, std::size_t max_order);

/// The classification corpus: zmod n for n <= 32, small fields and
/// products, matrix and upper-triangular rings over Z2, Z3, F4, and the
/// skew-triangular families with n in {2, 3, 4} over bases of order <= 16.
/// Rings above `order_cap` are left out.
std::vector<std::string> corpus_ring_specs(std::size_t order_cap = 1024);

/// Ring plus endomorphism specs for the skew extension suites. Not all of
/// them are alpha-compatible; suites report those as inapplicable.
std::vector<std::string> corpus_alpha_specs();

/// Ring, automorphism and derivation specs for the inverse-series suites:
/// zero, inner and table derivations.
std::vector<std::string> corpus_delta_specs();

}  // namespace cpb
