#include "cpb/monoid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "cpb/errors.hpp"
#include "linear_solver.hpp"

namespace cpb {

namespace {

std::int64_t narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw CapExceeded("rational monoid element overflows 64 bits");
  return static_cast<std::int64_t>(v);
}

MonoidElem reduce_rational(__int128 num, __int128 den) {
  if (den == 0) throw PreconditionError("zero denominator");
  if (num < 0 || den < 0) throw PreconditionError("Q+ elements are non-negative");
  if (num == 0) return {0, 1};
  __int128 a = num, b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return {narrow(num / a), narrow(den / a)};
}

std::vector<Elem> subgroup_generators(const FiniteRing& r, const ElementSet& s) {
  auto members = s.members();
  std::vector<Elem> gens;
  additive_span(r, members, &gens);
  return gens;
}

}  // namespace

std::string to_string(MonoidOrder order) {
  switch (order) {
    case MonoidOrder::kLex: return "lex";
    case MonoidOrder::kRevLex: return "revlex";
    case MonoidOrder::kDegreeLex: return "product";
    case MonoidOrder::kRationalUsual: return "usual";
  }
  return "?";
}

std::optional<MonoidOrder> monoid_order_from_tag(const std::string& tag) {
  if (tag == "lex") return MonoidOrder::kLex;
  if (tag == "revlex") return MonoidOrder::kRevLex;
  if (tag == "product" || tag == "degree-lex") return MonoidOrder::kDegreeLex;
  if (tag == "usual") return MonoidOrder::kRationalUsual;
  return std::nullopt;
}

OrderedMonoid OrderedMonoid::naturals(unsigned k, MonoidOrder order) {
  if (k == 0) throw PreconditionError("monoid rank must be positive");
  if (order == MonoidOrder::kRationalUsual) throw PreconditionError("the usual order belongs to Q+");
  return OrderedMonoid(k, order);
}

OrderedMonoid OrderedMonoid::rationals() { return OrderedMonoid(1, MonoidOrder::kRationalUsual); }

MonoidElem OrderedMonoid::identity() const {
  if (is_rational()) return {0, 1};
  return MonoidElem(rank_, 0);
}

MonoidElem OrderedMonoid::combine(const MonoidElem& g, const MonoidElem& h) const {
  if (is_rational()) {
    __int128 num = static_cast<__int128>(g[0]) * h[1] + static_cast<__int128>(h[0]) * g[1];
    __int128 den = static_cast<__int128>(g[1]) * h[1];
    return reduce_rational(num, den);
  }
  MonoidElem out(rank_);
  for (unsigned i = 0; i < rank_; ++i) out[i] = g[i] + h[i];
  return out;
}

int OrderedMonoid::compare(const MonoidElem& g, const MonoidElem& h) const {
  auto sign = [](auto d) { return d < 0 ? -1 : (d > 0 ? 1 : 0); };
  switch (order_) {
    case MonoidOrder::kRationalUsual:
      return sign(static_cast<__int128>(g[0]) * h[1] - static_cast<__int128>(h[0]) * g[1]);
    case MonoidOrder::kDegreeLex: {
      auto dg = std::accumulate(g.begin(), g.end(), std::int64_t{0});
      auto dh = std::accumulate(h.begin(), h.end(), std::int64_t{0});
      if (dg != dh) return sign(dg - dh);
      [[fallthrough]];
    }
    case MonoidOrder::kLex:
      for (unsigned i = 0; i < rank_; ++i)
        if (g[i] != h[i]) return sign(g[i] - h[i]);
      return 0;
    case MonoidOrder::kRevLex:
      for (unsigned i = rank_; i-- > 0;)
        if (g[i] != h[i]) return sign(g[i] - h[i]);
      return 0;
  }
  return 0;
}

MonoidElem OrderedMonoid::element(std::vector<std::int64_t> parts) const {
  if (is_rational()) {
    if (parts.size() == 1) parts.push_back(1);
    if (parts.size() != 2) throw PreconditionError("a Q+ element is numerator/denominator");
    return reduce_rational(parts[0], parts[1]);
  }
  if (parts.size() != rank_) throw PreconditionError("monoid element has the wrong number of coordinates");
  for (auto p : parts)
    if (p < 0) throw PreconditionError("monoid coordinates are non-negative");
  return parts;
}

std::string OrderedMonoid::describe(const MonoidElem& g) const {
  if (is_rational()) return g[1] == 1 ? std::to_string(g[0]) : std::to_string(g[0]) + "/" + std::to_string(g[1]);
  std::string s = "(";
  for (unsigned i = 0; i < rank_; ++i) s += (i ? "," : "") + std::to_string(g[i]);
  return s + ")";
}

std::vector<MonoidElem> OrderedMonoid::box(const std::vector<unsigned>& bounds) const {
  if (is_rational()) throw PreconditionError("box supports are for (N u {0})^k");
  if (bounds.size() != rank_) throw PreconditionError("box bounds need one entry per coordinate");
  std::vector<MonoidElem> out;
  MonoidElem cur(rank_, 0);
  while (true) {
    out.push_back(cur);
    unsigned i = 0;
    while (i < rank_ && cur[i] == static_cast<std::int64_t>(bounds[i])) cur[i++] = 0;
    if (i == rank_) break;
    ++cur[i];
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return less(a, b); });
  return out;
}

std::string OrderedMonoid::tag() const {
  if (is_rational()) return "rationals";
  return "naturals " + std::to_string(rank_) + " " + to_string(order_);
}

bool MonoidContext::in_support(const MonoidElem& g) const {
  auto it = std::lower_bound(support.begin(), support.end(), g,
                             [&](const MonoidElem& a, const MonoidElem& b) { return monoid.less(a, b); });
  return it != support.end() && *it == g;
}

std::string MonoidContext::describe(const MonoidAlgebraElement& f) const {
  if (f.terms.empty()) return base->label(base->zero());
  std::ostringstream out;
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    if (i) out << " + ";
    out << base->label(f.terms[i].second) << "*" << monoid.describe(f.terms[i].first);
  }
  return out.str();
}

MonoidAlgebraElement monoid_term(const MonoidContext& ctx, Elem a, const MonoidElem& g) {
  MonoidAlgebraElement f;
  if (a != ctx.base->zero()) f.terms.emplace_back(g, a);
  return f;
}

namespace {

MonoidAlgebraElement collect(const MonoidContext& ctx, std::vector<std::pair<MonoidElem, Elem>> raw,
                             const std::optional<MonoidElem>& bound) {
  const FiniteRing& r = *ctx.base;
  std::stable_sort(raw.begin(), raw.end(), [&](const auto& a, const auto& b) { return ctx.monoid.less(a.first, b.first); });
  MonoidAlgebraElement out;
  for (auto& [g, a] : raw) {
    if (bound && ctx.monoid.less(*bound, g)) continue;
    if (!out.terms.empty() && out.terms.back().first == g) {
      out.terms.back().second = r.add(out.terms.back().second, a);
    } else {
      out.terms.emplace_back(g, a);
    }
  }
  std::erase_if(out.terms, [&](const auto& t) { return t.second == r.zero(); });
  return out;
}

}  // namespace

MonoidAlgebraElement monoid_add(const MonoidContext& ctx, const MonoidAlgebraElement& f, const MonoidAlgebraElement& g) {
  auto raw = f.terms;
  raw.insert(raw.end(), g.terms.begin(), g.terms.end());
  return collect(ctx, std::move(raw), std::nullopt);
}

MonoidAlgebraElement monoid_mul(const MonoidContext& ctx, const MonoidAlgebraElement& f, const MonoidAlgebraElement& g,
                                const std::optional<MonoidElem>& bound) {
  const FiniteRing& r = *ctx.base;
  std::vector<std::pair<MonoidElem, Elem>> raw;
  raw.reserve(f.terms.size() * g.terms.size());
  for (const auto& [gf, a] : f.terms)
    for (const auto& [gg, b] : g.terms) {
      Elem ab = r.mul(a, b);
      if (ab != r.zero()) raw.emplace_back(ctx.monoid.combine(gf, gg), ab);
    }
  return collect(ctx, std::move(raw), bound);
}

bool lemma_l1_check(const OrderedMonoid& m, const MonoidElem& g, const MonoidElem& h) {
  MonoidElem k = m.combine(g, h);
  if (k == m.identity()) return true;
  return !m.less(k, g) && !m.less(k, h);
}

MonoidIdempotents monoid_idempotents(const MonoidContext& ctx, std::size_t cap) {
  const FiniteRing& r = *ctx.base;
  const auto& s = ctx.support;
  if (s.empty() || !(s.front() == ctx.monoid.identity()))
    throw PreconditionError("the support must start with the identity");
  const std::size_t m = s.size();
  // product_index[i][j] = index of s_i s_j in the support, or m when outside.
  std::vector<std::vector<std::size_t>> product_index(m, std::vector<std::size_t>(m, m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      MonoidElem k = ctx.monoid.combine(s[i], s[j]);
      auto it = std::lower_bound(s.begin(), s.end(), k, [&](const auto& a, const auto& b) { return ctx.monoid.less(a, b); });
      if (it != s.end() && *it == k) product_index[i][j] = static_cast<std::size_t>(it - s.begin());
    }

  MonoidIdempotents out;
  detail::LinearSolver solver(r);
  std::vector<Elem> coeffs(m, r.zero());
  auto dfs = [&](auto&& self, std::size_t p) -> void {
    if (out.truncated) return;
    if (p == m) {
      MonoidAlgebraElement e;
      for (std::size_t i = 0; i < m; ++i)
        if (coeffs[i] != r.zero()) e.terms.emplace_back(s[i], coeffs[i]);
      MonoidAlgebraElement sq = monoid_mul(ctx, e, e);
      bool escapes = std::any_of(sq.terms.begin(), sq.terms.end(), [&](const auto& t) { return !ctx.in_support(t.first); });
      if (escapes) {
        ++out.escaped;
        return;
      }
      if (!(sq == e)) throw ContractViolation("coefficient solver produced a non-idempotent " + ctx.describe(e));
      if (out.items.size() >= cap) {
        out.truncated = true;
        return;
      }
      out.items.push_back(std::move(e));
      return;
    }
    Elem acc = r.zero();
    for (std::size_t i = 1; i < p; ++i)
      for (std::size_t j = 1; j < p; ++j)
        if (product_index[i][j] == p) acc = r.add(acc, r.mul(coeffs[i], coeffs[j]));
    for (Elem y : solver.solutions(coeffs[0], coeffs[0], acc)) {
      coeffs[p] = y;
      self(self, p + 1);
      if (out.truncated) return;
    }
    coeffs[p] = r.zero();
  };
  for (Elem e0 : idempotents(r).members()) {
    std::fill(coeffs.begin(), coeffs.end(), r.zero());
    coeffs[0] = e0;
    dfs(dfs, 1);
    if (out.truncated) break;
  }
  return out;
}

LeastTermCheck lemma_l2_l3_check(const MonoidContext& ctx, const MonoidAlgebraElement& e) {
  const FiniteRing& r = *ctx.base;
  if (e.terms.empty()) throw PreconditionError("the zero element has no least term");
  MonoidAlgebraElement sq = monoid_mul(ctx, e, e);
  for (const auto& t : sq.terms)
    if (!ctx.in_support(t.first)) throw PreconditionError("square leaves the support; idempotency is not exact");
  if (!(sq == e)) throw PreconditionError("not an idempotent: " + ctx.describe(e));
  LeastTermCheck out;
  const auto& [g0, e0] = e.terms.front();
  out.least_is_identity = g0 == ctx.monoid.identity();
  out.least_coeff_idempotent = r.mul(e0, e0) == e0;
  ElementSet ideal = two_sided_ideal(r, ElementSet(r, {e0}));
  out.coefficients_in_ideal =
      std::all_of(e.terms.begin(), e.terms.end(), [&](const auto& t) { return ideal.contains(t.second); });
  return out;
}

MonoidAnnihilatorCheck thm_t1_check(const MonoidContext& ctx, const MonoidAlgebraElement& e, Elem c,
                                    std::size_t brute_limit) {
  const FiniteRing& r = *ctx.base;
  const auto gens = r.additive_generators();
  MonoidAnnihilatorCheck out;
  const Elem e0 = e.terms.empty() ? r.zero() : e.terms.front().second;
  ElementSet ann = right_annihilator(r, right_ideal(r, ElementSet(r, {e0})));
  out.base_ok = ann == right_ideal(r, ElementSet(r, {c}));
  if (!out.base_ok) out.counterexample = "r(e0 R) != c R";

  MonoidAlgebraElement ct = monoid_term(ctx, c, ctx.monoid.identity());
  out.contains_ok = true;
  for (Elem g : gens)
    for (const auto& s : ctx.support) {
      auto p = monoid_mul(ctx, monoid_mul(ctx, e, monoid_term(ctx, g, s)), ct);
      if (!p.terms.empty() && out.contains_ok) {
        out.contains_ok = false;
        out.counterexample = "e * " + r.label(g) + ctx.monoid.describe(s) + " * c != 0";
      }
    }

  out.reduction_ok = true;
  for (Elem a : subgroup_generators(r, ann))
    for (const auto& t : e.terms)
      for (Elem g : gens)
        if (r.mul(t.second, r.mul(g, a)) != r.zero() && out.reduction_ok) {
          out.reduction_ok = false;
          out.counterexample = "coefficient " + r.label(t.second) + " does not kill R r(e0 R)";
        }

  const std::size_t n = r.order();
  const std::size_t m = ctx.support.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < m && total <= brute_limit; ++i) total *= n;
  if (brute_limit == 0 || total > brute_limit) return out;
  for (std::size_t idx = 0; idx < total; ++idx) {
    MonoidAlgebraElement p;
    std::size_t rest = idx;
    bool reduced = true;
    for (std::size_t i = 0; i < m; ++i) {
      auto a = static_cast<Elem>(rest % n);
      rest /= n;
      if (a == r.zero()) continue;
      p.terms.emplace_back(ctx.support[i], a);
      if (!ann.contains(a)) reduced = false;
    }
    bool killed = true;
    for (Elem g : gens) {
      for (const auto& s : ctx.support) {
        if (!monoid_mul(ctx, monoid_mul(ctx, e, monoid_term(ctx, g, s)), p).terms.empty()) {
          killed = false;
          break;
        }
      }
      if (!killed) break;
    }
    ++out.brute_checked;
    if (killed != reduced) {
      out.brute_ok = false;
      out.counterexample = "direct annihilator test disagrees on " + ctx.describe(p);
      break;
    }
  }
  return out;
}

MonoidSuiteResult monoid_t1_suite(const MonoidContext& ctx, std::size_t brute_limit) {
  const FiniteRing& r = *ctx.base;
  MonoidSuiteResult out;
  out.monoid = ctx.monoid.tag();
  out.support_size = ctx.support.size();
  auto note = [&](const std::string& s) {
    if (out.counterexample.empty()) out.counterexample = s;
  };
  for (const auto& g : ctx.support)
    for (const auto& h : ctx.support)
      if (!lemma_l1_check(ctx.monoid, g, h)) {
        out.l1_ok = false;
        note("l1 fails for " + ctx.monoid.describe(g) + ", " + ctx.monoid.describe(h));
      }

  MonoidIdempotents idems = monoid_idempotents(ctx);
  out.idempotents = idems.items.size();
  out.escaped = idems.escaped;
  out.truncated = idems.truncated;
  CpBaerResult cp = right_cp_baer(r);
  if (cp.holds) out.annihilator_ok = true;
  for (const auto& e : idems.items) {
    if (e.terms.size() > 1 || (e.terms.size() == 1 && !(e.terms.front().first == ctx.monoid.identity())))
      ++out.nonconstant;
    if (e.terms.empty()) continue;
    if (!lemma_l2_l3_check(ctx, e).all()) {
      out.l2_l3_ok = false;
      note("least-term structure fails for " + ctx.describe(e));
    }
    if (!cp.holds) continue;
    auto check = thm_t1_check(ctx, e, cp.witness.at(e.terms.front().second), brute_limit);
    if (!check.passed()) {
      out.annihilator_ok = false;
      note(ctx.describe(e) + ": " + check.counterexample);
    }
  }
  return out;
}

}  // namespace cpb
