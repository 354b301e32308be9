#include "cpb/constructors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include <fmt/format.h>

#include "cpb/errors.hpp"

namespace cpb {

namespace {

std::string wrap(const std::string& expr) {
  return expr.find(' ') == std::string::npos ? expr : "(" + expr + ")";
}

std::size_t checked_power(std::size_t q, std::size_t m, std::size_t cap) {
  std::size_t order = 1;
  for (std::size_t i = 0; i < m; ++i) {
    order *= q;
    if (order > cap || order > kHardOrderLimit) {
      throw CapExceeded(fmt::format("ring of order {}^{} exceeds cap {}", q, m, std::min(cap, kHardOrderLimit)));
    }
  }
  return order;
}

// Mixed-radix tuple codec with a single radix q.
struct TupleCodec {
  std::size_t q;
  std::size_t m;
  std::size_t order;

  void decode(std::size_t id, Elem* out) const {
    for (std::size_t k = 0; k < m; ++k) {
      out[k] = static_cast<Elem>(id % q);
      id /= q;
    }
  }
  Elem encode(const Elem* t) const {
    std::size_t id = 0;
    for (std::size_t k = m; k-- > 0;) id = id * q + t[k];
    return static_cast<Elem>(id);
  }
};

// Builds the tables of a ring whose elements are m-tuples over `base` with
// componentwise addition and the given tuple product.
FiniteRing tuple_ring(const FiniteRing& base, std::size_t m, std::size_t cap,
                      const std::function<void(const Elem*, const Elem*, Elem*)>& product,
                      std::span<const Elem> one_tuple, std::string provenance) {
  const std::size_t order = checked_power(base.order(), m, cap);
  TupleCodec codec{base.order(), m, order};
  std::vector<Elem> tuples(order * m);
  for (std::size_t id = 0; id < order; ++id) codec.decode(id, &tuples[id * m]);

  FiniteRing::Tables t;
  t.order = order;
  t.add.resize(order * order);
  t.mul.resize(order * order);
  std::vector<Elem> buf(m);
  for (std::size_t a = 0; a < order; ++a) {
    const Elem* ta = &tuples[a * m];
    for (std::size_t b = 0; b < order; ++b) {
      const Elem* tb = &tuples[b * m];
      for (std::size_t k = 0; k < m; ++k) buf[k] = base.add(ta[k], tb[k]);
      t.add[a * order + b] = codec.encode(buf.data());
      product(ta, tb, buf.data());
      t.mul[a * order + b] = codec.encode(buf.data());
    }
  }
  std::vector<Elem> zero_tuple(m, base.zero());
  t.zero = codec.encode(zero_tuple.data());
  t.one = codec.encode(one_tuple.data());
  t.provenance = std::move(provenance);
  return FiniteRing::from_tables(std::move(t), cap);
}

RingPtr finish(FiniteRing r) {
  auto v = validate_axioms(r);
  if (!v.empty()) throw ContractViolation("constructed ring violates " + v.front().describe());
  return std::make_shared<const FiniteRing>(std::move(r));
}

bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Polynomials over Z_p as coefficient vectors, lowest degree first.
using Poly = std::vector<unsigned>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo a monic g.
Poly poly_mod(Poly f, const Poly& g, unsigned p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    unsigned lead = f.back();
    std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) f[shift + i] = (f[shift + i] + p - (lead * g[i]) % p) % p;
    trim(f);
  }
  return f;
}

Poly monic_from_code(std::size_t code, unsigned p, unsigned degree) {
  Poly f(degree + 1, 0);
  for (unsigned i = 0; i < degree; ++i) {
    f[i] = static_cast<unsigned>(code % p);
    code /= p;
  }
  f[degree] = 1;
  return f;
}

bool irreducible(const Poly& f, unsigned p) {
  const unsigned k = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; 2 * d <= k; ++d) {
    std::size_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (std::size_t code = 0; code < count; ++code) {
      if (poly_mod(f, monic_from_code(code, p, d), p).empty()) return false;
    }
  }
  return true;
}

}  // namespace

RingPtr make_zmod(unsigned n, std::size_t order_cap) {
  if (n < 2) throw PreconditionError("zmod needs n >= 2");
  if (n > order_cap || n > kHardOrderLimit) throw CapExceeded(fmt::format("zmod {} exceeds order cap", n));
  FiniteRing::Tables t;
  t.order = n;
  t.add.resize(std::size_t{n} * n);
  t.mul.resize(std::size_t{n} * n);
  for (unsigned a = 0; a < n; ++a) {
    for (unsigned b = 0; b < n; ++b) {
      t.add[a * n + b] = static_cast<Elem>((a + b) % n);
      t.mul[a * n + b] = static_cast<Elem>((a * b) % n);
    }
  }
  t.zero = 0;
  t.one = 1;
  t.provenance = fmt::format("zmod {}", n);
  return finish(FiniteRing::from_tables(std::move(t), order_cap));
}

std::vector<unsigned> field_modulus(unsigned p, unsigned k) {
  if (!is_prime(p)) throw PreconditionError(fmt::format("field characteristic {} is not prime", p));
  if (k < 1) throw PreconditionError("field degree must be at least 1");
  std::size_t count = 1;
  for (unsigned i = 0; i < k; ++i) {
    count *= p;
    if (count > kHardOrderLimit) throw CapExceeded(fmt::format("field {}^{} exceeds the hard order limit", p, k));
  }
  for (std::size_t code = 0; code < count; ++code) {
    Poly f = monic_from_code(code, p, k);
    if (irreducible(f, p)) return Poly(f.begin(), f.end() - 1);
  }
  throw ContractViolation("no irreducible polynomial found");  // cannot happen
}

RingPtr make_field(unsigned p, unsigned k, std::size_t order_cap) {
  Poly lower = field_modulus(p, k);
  Poly modulus = lower;
  modulus.push_back(1);
  const std::size_t order = checked_power(p, k, order_cap);
  TupleCodec codec{p, k, order};

  FiniteRing::Tables t;
  t.order = order;
  t.add.resize(order * order);
  t.mul.resize(order * order);
  std::vector<Elem> ta(k), tb(k), tc(k);
  for (std::size_t a = 0; a < order; ++a) {
    codec.decode(a, ta.data());
    for (std::size_t b = 0; b < order; ++b) {
      codec.decode(b, tb.data());
      for (unsigned i = 0; i < k; ++i) tc[i] = static_cast<Elem>((ta[i] + tb[i]) % p);
      t.add[a * order + b] = codec.encode(tc.data());
      Poly prod(2 * k, 0);
      for (unsigned i = 0; i < k; ++i)
        for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + ta[i] * tb[j]) % p;
      Poly r = poly_mod(prod, modulus, p);
      std::fill(tc.begin(), tc.end(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) tc[i] = static_cast<Elem>(r[i]);
      t.mul[a * order + b] = codec.encode(tc.data());
    }
  }
  t.zero = 0;
  t.one = 1;
  t.provenance = fmt::format("field {} {}", p, k);
  return finish(FiniteRing::from_tables(std::move(t), order_cap));
}

RingPtr make_product(const FiniteRing& r1, const FiniteRing& r2, std::size_t order_cap) {
  const std::size_t q1 = r1.order(), q2 = r2.order();
  const std::size_t order = q1 * q2;
  if (order > order_cap || order > kHardOrderLimit) {
    throw CapExceeded(fmt::format("product of order {} exceeds cap", order));
  }
  FiniteRing::Tables t;
  t.order = order;
  t.add.resize(order * order);
  t.mul.resize(order * order);
  for (std::size_t a = 0; a < order; ++a) {
    const Elem a1 = static_cast<Elem>(a % q1), a2 = static_cast<Elem>(a / q1);
    for (std::size_t b = 0; b < order; ++b) {
      const Elem b1 = static_cast<Elem>(b % q1), b2 = static_cast<Elem>(b / q1);
      t.add[a * order + b] = static_cast<Elem>(r1.add(a1, b1) + q1 * r2.add(a2, b2));
      t.mul[a * order + b] = static_cast<Elem>(r1.mul(a1, b1) + q1 * r2.mul(a2, b2));
    }
  }
  t.zero = static_cast<Elem>(r1.zero() + q1 * r2.zero());
  t.one = static_cast<Elem>(r1.one() + q1 * r2.one());
  t.provenance = fmt::format("product {} {}", wrap(r1.provenance()), wrap(r2.provenance()));
  return finish(FiniteRing::from_tables(std::move(t), order_cap));
}

std::vector<Elem> skew_matrix_product(const FiniteRing& base, const RingMorphism* sigma, unsigned n,
                                      std::span<const Elem> a, std::span<const Elem> b) {
  std::vector<Elem> c(std::size_t{n} * n, base.zero());
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      Elem acc = base.zero();
      for (unsigned k = 0; k < n; ++k) {
        Elem rhs = b[k * n + j];
        if (sigma != nullptr) {
          if (k < i || j < k) continue;  // triangular support
          rhs = sigma->power(rhs, static_cast<long>(k - i));
        }
        acc = base.add(acc, base.mul(a[i * n + k], rhs));
      }
      c[i * n + j] = acc;
    }
  }
  return c;
}

RingPtr make_matrix(const FiniteRing& r, unsigned n, std::size_t order_cap) {
  if (n < 1) throw PreconditionError("matrix size must be at least 1");
  const std::size_t m = std::size_t{n} * n;
  std::vector<Elem> one(m, r.zero());
  for (unsigned i = 0; i < n; ++i) one[i * n + i] = r.one();
  auto product = [&](const Elem* a, const Elem* b, Elem* out) {
    auto c = skew_matrix_product(r, nullptr, n, std::span<const Elem>(a, m), std::span<const Elem>(b, m));
    std::copy(c.begin(), c.end(), out);
  };
  return finish(tuple_ring(r, m, order_cap, product, one, fmt::format("matrix {} {}", n, wrap(r.provenance()))));
}

RingPtr make_upper_triangular(const FiniteRing& r, unsigned n, std::size_t order_cap) {
  if (n < 1) throw PreconditionError("matrix size must be at least 1");
  std::vector<std::pair<unsigned, unsigned>> pos;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i; j < n; ++j) pos.emplace_back(i, j);
  const std::size_t m = pos.size();
  std::vector<Elem> one(m, r.zero());
  for (std::size_t p = 0; p < m; ++p)
    if (pos[p].first == pos[p].second) one[p] = r.one();
  std::vector<Elem> ma(std::size_t{n} * n), mb(std::size_t{n} * n);
  auto product = [&](const Elem* a, const Elem* b, Elem* out) {
    std::fill(ma.begin(), ma.end(), r.zero());
    std::fill(mb.begin(), mb.end(), r.zero());
    for (std::size_t p = 0; p < m; ++p) {
      ma[pos[p].first * n + pos[p].second] = a[p];
      mb[pos[p].first * n + pos[p].second] = b[p];
    }
    auto c = skew_matrix_product(r, nullptr, n, ma, mb);
    for (std::size_t p = 0; p < m; ++p) out[p] = c[pos[p].first * n + pos[p].second];
  };
  return finish(tuple_ring(r, m, order_cap, product, one,
                           fmt::format("upper_triangular {} {}", n, wrap(r.provenance()))));
}

RingPtr make_quotient(const FiniteRing& r, const ElementSet& ideal, std::size_t order_cap) {
  if (ideal.universe() != r.order() || !is_two_sided_ideal(r, ideal)) {
    throw PreconditionError("quotient needs a two-sided ideal");
  }
  if (ideal.size() == r.order()) throw PreconditionError("quotient by the whole ring has 0 = 1");
  const std::size_t n = r.order();
  const auto members = ideal.members();
  std::vector<int> rep(n, -1);
  std::vector<Elem> reps;
  for (std::size_t a = 0; a < n; ++a) {
    if (rep[a] >= 0) continue;
    reps.push_back(static_cast<Elem>(a));
    for (Elem i : members) rep[r.add(static_cast<Elem>(a), i)] = static_cast<int>(a);
  }
  std::vector<Elem> new_id(n);
  for (std::size_t k = 0; k < reps.size(); ++k) new_id[reps[k]] = static_cast<Elem>(k);
  auto cls = [&](Elem a) { return new_id[static_cast<std::size_t>(rep[a])]; };

  const std::size_t q = reps.size();
  FiniteRing::Tables t;
  t.order = q;
  t.add.resize(q * q);
  t.mul.resize(q * q);
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = 0; b < q; ++b) {
      t.add[a * q + b] = cls(r.add(reps[a], reps[b]));
      t.mul[a * q + b] = cls(r.mul(reps[a], reps[b]));
    }
  }
  t.zero = cls(r.zero());
  t.one = cls(r.one());
  for (Elem a : reps) t.labels.push_back("[" + r.label(a) + "]");
  std::string ids;
  for (Elem i : members) ids += (ids.empty() ? "" : " ") + std::to_string(i);
  t.provenance = fmt::format("quotient {} [{}]", wrap(r.provenance()), ids);
  return finish(FiniteRing::from_tables(std::move(t), order_cap));
}

// ---------------------------------------------------------------------------
// Skew triangular families

std::string family_tag(TriangularFamily f) {
  switch (f) {
    case TriangularFamily::kFullUpper: return "Tn";
    case TriangularFamily::kConstantMainDiag: return "S";
    case TriangularFamily::kConstantDiagonals: return "T";
    case TriangularFamily::kA: return "A";
    case TriangularFamily::kB: return "B";
  }
  return "?";
}

std::optional<TriangularFamily> family_from_tag(const std::string& tag) {
  for (auto f : {TriangularFamily::kFullUpper, TriangularFamily::kConstantMainDiag,
                 TriangularFamily::kConstantDiagonals, TriangularFamily::kA, TriangularFamily::kB}) {
    if (family_tag(f) == tag) return f;
  }
  return std::nullopt;
}

namespace {

using Positions = std::vector<std::vector<std::pair<unsigned, unsigned>>>;

Positions family_layout(TriangularFamily family, unsigned n) {
  Positions out;
  auto diagonal = [n](unsigned d) {
    std::vector<std::pair<unsigned, unsigned>> v;
    for (unsigned i = 0; i + d < n; ++i) v.emplace_back(i, i + d);
    return v;
  };
  auto free_from = [&](unsigned first_offset) {
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + first_offset; j < n; ++j) out.push_back({{i, j}});
  };
  switch (family) {
    case TriangularFamily::kFullUpper:
      free_from(0);
      break;
    case TriangularFamily::kConstantMainDiag:
      out.push_back(diagonal(0));
      free_from(1);
      break;
    case TriangularFamily::kConstantDiagonals:
      for (unsigned d = 0; d < n; ++d) out.push_back(diagonal(d));
      break;
    case TriangularFamily::kA:
    case TriangularFamily::kB: {
      const unsigned half = n / 2;
      for (unsigned d = 0; d < half; ++d) out.push_back(diagonal(d));
      if (family == TriangularFamily::kB) {
        // Entry (1, k) in 1-based indexing is independent of its diagonal.
        const unsigned k = n / 2;
        auto& diag = out[k - 1];
        diag.erase(std::remove(diag.begin(), diag.end(), std::pair<unsigned, unsigned>{0, k - 1}), diag.end());
        out.push_back({{0, k - 1}});
      }
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i + half; j < n; ++j) out.push_back({{i, j}});
      break;
    }
  }
  return out;
}

}  // namespace

SkewTriangular SkewTriangular::build(const SkewTriangularSpec& spec, std::size_t order_cap) {
  if (spec.n < 1) throw PreconditionError("skew triangular size must be at least 1");
  if (spec.family == TriangularFamily::kB && (spec.n % 2 != 0 || spec.n < 4)) {
    throw PreconditionError(fmt::format("family B needs n = 2k >= 4, got n = {}", spec.n));
  }
  if (spec.family == TriangularFamily::kA && spec.n < 2) {
    throw PreconditionError("family A needs n >= 2");
  }
  SkewTriangular st(spec);
  st.positions_ = family_layout(spec.family, spec.n);
  const FiniteRing& base = *spec.sigma.ring();
  const unsigned n = spec.n;
  const std::size_t m = st.positions_.size();

  std::vector<Elem> one(m, base.zero());
  for (std::size_t p = 0; p < m; ++p)
    if (st.positions_[p].front().first == st.positions_[p].front().second) one[p] = base.one();

  std::vector<Elem> ma(std::size_t{n} * n), mb(std::size_t{n} * n);
  auto fill = [&](const Elem* params, std::vector<Elem>& mat) {
    std::fill(mat.begin(), mat.end(), base.zero());
    for (std::size_t p = 0; p < m; ++p)
      for (auto [i, j] : st.positions_[p]) mat[i * n + j] = params[p];
  };
  const RingMorphism* sigma = &st.spec_.sigma;
  auto product = [&](const Elem* a, const Elem* b, Elem* out) {
    fill(a, ma);
    fill(b, mb);
    auto c = skew_matrix_product(base, sigma, n, ma, mb);
    for (std::size_t p = 0; p < m; ++p) {
      auto [i0, j0] = st.positions_[p].front();
      out[p] = c[i0 * n + j0];
      for (auto [i, j] : st.positions_[p]) {
        if (c[i * n + j] != out[p]) {
          throw ContractViolation(fmt::format("family {} is not closed under the skew product at ({}, {})",
                                              family_tag(spec.family), i, j));
        }
      }
    }
  };
  std::string prov = fmt::format("skew_triangular {} {} {} {}", family_tag(spec.family), n,
                                 wrap(base.provenance()), wrap(spec.sigma.name()));
  st.ring_ = finish(tuple_ring(base, m, order_cap, product, one, std::move(prov)));
  return st;
}

std::vector<Elem> SkewTriangular::parameters(Elem id) const {
  TupleCodec codec{base().order(), positions_.size(), ring_->order()};
  std::vector<Elem> out(positions_.size());
  codec.decode(id, out.data());
  return out;
}

Elem SkewTriangular::from_parameters(std::span<const Elem> params) const {
  if (params.size() != positions_.size()) throw StructuralError("parameter count mismatch");
  TupleCodec codec{base().order(), positions_.size(), ring_->order()};
  return codec.encode(params.data());
}

std::vector<Elem> SkewTriangular::matrix_of(Elem id) const {
  const unsigned n = spec_.n;
  std::vector<Elem> mat(std::size_t{n} * n, base().zero());
  auto params = parameters(id);
  for (std::size_t p = 0; p < positions_.size(); ++p)
    for (auto [i, j] : positions_[p]) mat[i * n + j] = params[p];
  return mat;
}

std::optional<Elem> SkewTriangular::from_matrix(std::span<const Elem> entries) const {
  const unsigned n = spec_.n;
  if (entries.size() != std::size_t{n} * n) return std::nullopt;
  std::vector<Elem> params(positions_.size());
  std::vector<bool> covered(entries.size(), false);
  for (std::size_t p = 0; p < positions_.size(); ++p) {
    auto [i0, j0] = positions_[p].front();
    params[p] = entries[i0 * n + j0];
    for (auto [i, j] : positions_[p]) {
      if (entries[i * n + j] != params[p]) return std::nullopt;
      covered[i * n + j] = true;
    }
  }
  for (std::size_t k = 0; k < entries.size(); ++k)
    if (!covered[k] && entries[k] != base().zero()) return std::nullopt;
  return from_parameters(params);
}

std::vector<Elem> SkewTriangular::coefficients(Elem id) const {
  if (spec_.family != TriangularFamily::kConstantDiagonals) {
    throw PreconditionError("coefficient form exists only for the constant-diagonals family");
  }
  return parameters(id);
}

Elem SkewTriangular::from_coefficients(std::span<const Elem> coeffs) const {
  if (spec_.family != TriangularFamily::kConstantDiagonals) {
    throw PreconditionError("coefficient form exists only for the constant-diagonals family");
  }
  return from_parameters(coeffs);
}

// ---------------------------------------------------------------------------
// Shift ring

ShiftRing::ShiftRing(RingPtr field) : field_(std::move(field)) {}

ShiftRing::Element ShiftRing::normalize(Element x) const {
  std::erase_if(x.support, [&](const auto& kv) { return kv.second == field_->zero(); });
  return x;
}

ShiftRing::Element ShiftRing::unit_vector(long i, Elem lambda) const {
  Element e = zero();
  e.support[i] = lambda;
  return normalize(std::move(e));
}

ShiftRing::Element ShiftRing::add(const Element& x, const Element& y) const {
  Element out{field_->add(x.scalar, y.scalar), x.support};
  for (auto [i, v] : y.support) {
    auto it = out.support.find(i);
    out.support[i] = it == out.support.end() ? v : field_->add(it->second, v);
  }
  return normalize(std::move(out));
}

ShiftRing::Element ShiftRing::neg(const Element& x) const {
  Element out{field_->neg(x.scalar), {}};
  for (auto [i, v] : x.support) out.support[i] = field_->neg(v);
  return out;
}

ShiftRing::Element ShiftRing::mul(const Element& x, const Element& y) const {
  const FiniteRing& f = *field_;
  Element out{f.mul(x.scalar, y.scalar), {}};
  auto at = [&](const Element& e, long i) {
    auto it = e.support.find(i);
    return it == e.support.end() ? f.zero() : it->second;
  };
  std::vector<long> keys;
  for (auto& kv : x.support) keys.push_back(kv.first);
  for (auto& kv : y.support) keys.push_back(kv.first);
  for (long i : keys) {
    Elem s = at(x, i), t = at(y, i);
    out.support[i] = f.add(f.add(f.mul(x.scalar, t), f.mul(s, y.scalar)), f.mul(s, t));
  }
  return normalize(std::move(out));
}

ShiftRing::Element ShiftRing::alpha(const Element& x) const {
  Element out{x.scalar, {}};
  for (auto [i, v] : x.support) out.support[i - 1] = v;
  return out;
}

bool ShiftRing::is_zero(const Element& x) const { return x.scalar == field_->zero() && x.support.empty(); }

std::string ShiftRing::describe(const Element& x) const {
  std::string s = fmt::format("{}*1", field_->label(x.scalar));
  for (auto [i, v] : x.support) s += fmt::format(" + {}*e[{}]", field_->label(v), i);
  return s;
}

}  // namespace cpb
