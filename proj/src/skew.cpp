#include "cpb/skew.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "cpb/errors.hpp"
#include "linear_solver.hpp"

namespace cpb {

namespace {

ExactSeries monomial_series(Elem a, long k) { return ExactSeries{k, {a}}; }

ExactSeries truncate_above(const FiniteRing& r, ExactSeries f, long high) {
  long top = f.low + static_cast<long>(f.coeffs.size()) - 1;
  if (top > high) f.coeffs.resize(static_cast<std::size_t>(std::max(0L, high - f.low + 1)));
  return trimmed(r, std::move(f));
}

// Product inside the context's arithmetic: truncated for power series,
// exact otherwise.
ExactSeries kind_product(const SkewContext& ctx, const ExactSeries& f, const ExactSeries& g) {
  ExactSeries p = exact_product(ctx.alpha, f, g);
  if (ctx.kind == SeriesKind::kPowerSeries) return truncate_above(ctx.base(), std::move(p), ctx.high());
  return p;
}

std::string describe_series(const FiniteRing& r, const ExactSeries& f) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs[i] == r.zero()) continue;
    if (!first) out << " + ";
    first = false;
    long k = f.low + static_cast<long>(i);
    out << r.label(f.coeffs[i]);
    if (k != 0) out << "*x^" << k;
  }
  if (first) out << r.label(r.zero());
  return out.str();
}

bool is_semicommutative(const FiniteRing& r) {
  const auto gens = r.additive_generators();
  for (std::size_t a = 0; a < r.order(); ++a)
    for (std::size_t b = 0; b < r.order(); ++b) {
      if (r.mul(static_cast<Elem>(a), static_cast<Elem>(b)) != r.zero()) continue;
      for (Elem g : gens)
        if (r.mul(r.mul(static_cast<Elem>(a), g), static_cast<Elem>(b)) != r.zero()) return false;
    }
  return true;
}

bool left_semicentral_in_base(const FiniteRing& r, Elem e) {
  for (Elem g : r.additive_generators()) {
    Elem ge = r.mul(g, e);
    if (ge != r.mul(e, ge)) return false;
  }
  return true;
}

std::vector<Elem> ideal_generators(const FiniteRing& r, const ElementSet& s) {
  auto members = s.members();
  std::vector<Elem> gens;
  additive_span(r, members, &gens);
  return gens;
}

// Mixed-radix decoding of a polynomial index into degree+1 coefficients.
ExactSeries decode_poly(std::size_t index, std::size_t n, unsigned degree) {
  ExactSeries f;
  f.coeffs.resize(degree + 1);
  for (unsigned k = 0; k <= degree; ++k) {
    f.coeffs[k] = static_cast<Elem>(index % n);
    index /= n;
  }
  return f;
}

std::size_t checked_power(std::size_t n, unsigned e, std::size_t limit) {
  std::size_t p = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (p > limit / std::max<std::size_t>(n, 1)) return limit + 1;
    p *= n;
  }
  return p;
}

}  // namespace

ExactSeries exact_product(const RingMorphism& alpha, const ExactSeries& f, const ExactSeries& g) {
  const FiniteRing& r = *alpha.ring();
  ExactSeries out;
  if (f.coeffs.empty() || g.coeffs.empty()) return out;
  out.low = f.low + g.low;
  out.coeffs.assign(f.coeffs.size() + g.coeffs.size() - 1, r.zero());
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    Elem fi = f.coeffs[i];
    if (fi == r.zero()) continue;
    auto twist = alpha.power_table(f.low + static_cast<long>(i));
    for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
      Elem t = r.mul(fi, twist[g.coeffs[j]]);
      out.coeffs[i + j] = r.add(out.coeffs[i + j], t);
    }
  }
  return out;
}

ExactSeries exact_sum(const FiniteRing& r, const ExactSeries& f, const ExactSeries& g) {
  if (f.coeffs.empty()) return g;
  if (g.coeffs.empty()) return f;
  long lo = std::min(f.low, g.low);
  long hi = std::max(f.low + static_cast<long>(f.coeffs.size()), g.low + static_cast<long>(g.coeffs.size()));
  ExactSeries out{lo, std::vector<Elem>(static_cast<std::size_t>(hi - lo), r.zero())};
  for (long k = lo; k < hi; ++k)
    out.coeffs[static_cast<std::size_t>(k - lo)] = r.add(f.at(k, r.zero()), g.at(k, r.zero()));
  return out;
}

ExactSeries trimmed(const FiniteRing& r, ExactSeries f) {
  std::size_t first = 0;
  while (first < f.coeffs.size() && f.coeffs[first] == r.zero()) ++first;
  if (first == f.coeffs.size()) return {};
  std::size_t last = f.coeffs.size();
  while (f.coeffs[last - 1] == r.zero()) --last;
  ExactSeries out{f.low + static_cast<long>(first),
                  std::vector<Elem>(f.coeffs.begin() + static_cast<long>(first), f.coeffs.begin() + static_cast<long>(last))};
  return out;
}

bool is_zero_series(const FiniteRing& r, const ExactSeries& f) {
  return std::all_of(f.coeffs.begin(), f.coeffs.end(), [&](Elem a) { return a == r.zero(); });
}

bool same_series(const FiniteRing& r, const ExactSeries& f, const ExactSeries& g) {
  auto a = trimmed(r, f);
  auto b = trimmed(r, g);
  return a.low == b.low && a.coeffs == b.coeffs;
}

std::string to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::kPolynomial: return "polynomial";
    case SeriesKind::kPowerSeries: return "power-series";
    case SeriesKind::kLaurentWindow: return "laurent-window";
  }
  return "?";
}

SkewContextPtr make_skew_context(RingMorphism alpha, SeriesKind kind, unsigned bound) {
  if (kind == SeriesKind::kLaurentWindow && !alpha.is_automorphism())
    throw PreconditionError("Laurent window needs a bijective endomorphism");
  return std::make_shared<const SkewContext>(SkewContext{std::move(alpha), kind, bound});
}

SkewSeries::SkewSeries(SkewContextPtr ctx) : ctx_(std::move(ctx)) {
  coeffs_.assign(static_cast<std::size_t>(ctx_->high() - ctx_->low() + 1), ctx_->base().zero());
}

SkewSeries SkewSeries::constant(SkewContextPtr ctx, Elem a) { return monomial(std::move(ctx), a, 0); }

SkewSeries SkewSeries::monomial(SkewContextPtr ctx, Elem a, long k) {
  SkewSeries s(std::move(ctx));
  s.set_coeff(k, a);
  return s;
}

SkewSeries SkewSeries::from_exact(SkewContextPtr ctx, const ExactSeries& f) {
  SkewSeries s(std::move(ctx));
  const FiniteRing& r = s.base();
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    long k = f.low + static_cast<long>(i);
    Elem a = f.coeffs[i];
    if (k >= s.ctx_->low() && k <= s.ctx_->high()) {
      s.coeffs_[static_cast<std::size_t>(k - s.ctx_->low())] = a;
    } else if (a != r.zero() && !(s.ctx_->kind == SeriesKind::kPowerSeries && k > s.ctx_->high())) {
      throw CapExceeded("coefficient of x^" + std::to_string(k) + " outside the tracked range of a " +
                        to_string(s.ctx_->kind));
    }
  }
  return s;
}

Elem SkewSeries::coeff(long k) const {
  if (k < ctx_->low() || k > ctx_->high()) return base().zero();
  return coeffs_[static_cast<std::size_t>(k - ctx_->low())];
}

void SkewSeries::set_coeff(long k, Elem a) {
  if (k < ctx_->low() || k > ctx_->high())
    throw PreconditionError("exponent " + std::to_string(k) + " outside the tracked range");
  if (a >= base().order()) throw StructuralError("coefficient id out of range");
  coeffs_[static_cast<std::size_t>(k - ctx_->low())] = a;
}

ExactSeries SkewSeries::exact() const { return trimmed(base(), ExactSeries{ctx_->low(), coeffs_}); }

bool SkewSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [&](Elem a) { return a == base().zero(); });
}

bool SkewSeries::is_constant() const {
  for (long k = ctx_->low(); k <= ctx_->high(); ++k)
    if (k != 0 && coeff(k) != base().zero()) return false;
  return true;
}

std::string SkewSeries::describe() const { return describe_series(base(), ExactSeries{ctx_->low(), coeffs_}); }

bool operator==(const SkewSeries& f, const SkewSeries& g) {
  return f.ctx_ == g.ctx_ && f.coeffs_ == g.coeffs_;
}

namespace {
void require_same_context(const SkewSeries& f, const SkewSeries& g) {
  if (f.context_ptr() != g.context_ptr()) throw StructuralError("skew series from different contexts");
}
}  // namespace

SkewSeries skew_add(const SkewSeries& f, const SkewSeries& g) {
  require_same_context(f, g);
  SkewSeries out(f.context_ptr());
  for (long k = f.context().low(); k <= f.context().high(); ++k)
    out.set_coeff(k, f.base().add(f.coeff(k), g.coeff(k)));
  return out;
}

SkewSeries skew_neg(const SkewSeries& f) {
  SkewSeries out(f.context_ptr());
  for (long k = f.context().low(); k <= f.context().high(); ++k) out.set_coeff(k, f.base().neg(f.coeff(k)));
  return out;
}

SkewSeries skew_mul(const SkewSeries& f, const SkewSeries& g) {
  require_same_context(f, g);
  return SkewSeries::from_exact(f.context_ptr(), exact_product(f.context().alpha, f.exact(), g.exact()));
}

IdempotentEnumeration enumerate_idempotents(const SkewContextPtr& ctx, std::size_t cap) {
  if (ctx->kind == SeriesKind::kLaurentWindow)
    throw PreconditionError("coefficientwise enumeration needs a polynomial or power-series context");
  const FiniteRing& r = ctx->base();
  const RingMorphism& alpha = ctx->alpha;
  const unsigned n_top = ctx->bound;
  IdempotentEnumeration out;
  detail::LinearSolver solver(r);
  std::vector<Elem> coeffs(n_top + 1, r.zero());

  auto accept = [&] {
    ExactSeries e{0, coeffs};
    if (ctx->kind == SeriesKind::kPolynomial) {
      ExactSeries sq = exact_product(alpha, e, e);
      if (!same_series(r, sq, e)) {
        ++out.rejected;
        return;
      }
    }
    out.items.push_back(SkewSeries::from_exact(ctx, e));
  };

  auto dfs = [&](auto&& self, unsigned k) -> void {
    if (out.truncated) return;
    if (k > n_top) {
      if (out.items.size() >= cap) {
        out.truncated = true;
        return;
      }
      accept();
      return;
    }
    Elem s = r.zero();
    for (unsigned i = 1; i < k; ++i) s = r.add(s, r.mul(coeffs[i], alpha.power(coeffs[k - i], i)));
    Elem e0 = coeffs[0];
    const auto& ys = solver.solutions(e0, alpha.power(e0, k), s);
    for (Elem y : ys) {
      coeffs[k] = y;
      self(self, k + 1);
      if (out.truncated) return;
    }
    coeffs[k] = r.zero();
  };

  for (Elem e0 : idempotents(r).members()) {
    coeffs.assign(n_top + 1, r.zero());
    coeffs[0] = e0;
    dfs(dfs, 1);
    if (out.truncated) break;
  }
  return out;
}

bool is_idempotent(const SkewSeries& e) {
  const SkewContext& ctx = e.context();
  ExactSeries f = e.exact();
  ExactSeries sq = kind_product(ctx, f, f);
  return same_series(ctx.base(), sq, f);
}

bool coefficients_in_ideal_of_constant(const SkewSeries& e) {
  if (!is_idempotent(e)) throw PreconditionError("not an idempotent: " + e.describe());
  const FiniteRing& r = e.base();
  ElementSet ideal = two_sided_ideal(r, ElementSet(r, {e.coeff(0)}));
  for (Elem a : e.coefficients())
    if (!ideal.contains(a)) return false;
  return true;
}

bool is_left_semicentral_bounded(const SkewSeries& e) {
  const SkewContext& ctx = e.context();
  const FiniteRing& r = ctx.base();
  ExactSeries f = e.exact();
  for (Elem g : r.additive_generators()) {
    for (long t = std::max(0L, ctx.low()); t <= ctx.high(); ++t) {
      ExactSeries m = monomial_series(g, t);
      ExactSeries me = kind_product(ctx, m, f);
      ExactSeries eme = kind_product(ctx, f, me);
      if (!same_series(r, me, eme)) return false;
    }
  }
  return true;
}

SemicentralStructure semicentral_structure(const SkewSeries& e) {
  if (!is_left_semicentral_bounded(e)) throw PreconditionError("not left semicentral: " + e.describe());
  const SkewContext& ctx = e.context();
  const FiniteRing& r = ctx.base();
  const Elem e0 = e.coeff(0);
  SemicentralStructure s;
  s.constant_left_semicentral = left_semicentral_in_base(r, e0);
  s.absorbs_on_left = true;
  s.kills_on_right = true;
  for (long k = ctx.low(); k <= ctx.high(); ++k) {
    Elem ek = e.coeff(k);
    if (r.mul(e0, ek) != ek) s.absorbs_on_left = false;
    if (k >= 1 && r.mul(ek, e0) != r.zero()) s.kills_on_right = false;
  }
  ExactSeries f = e.exact();
  ExactSeries c0 = trimmed(r, monomial_series(e0, 0));
  s.same_right_ideal = same_series(r, kind_product(ctx, c0, f), f) && same_series(r, kind_product(ctx, f, c0), c0);
  return s;
}

Elem annihilator_generator(const SkewSeries& e, const CpBaerResult& base) {
  const FiniteRing& r = e.base();
  const Elem e0 = e.coeff(0);
  auto it = base.witness.find(e0);
  if (it == base.witness.end())
    throw PreconditionError("base idempotent " + r.label(e0) + " has no idempotent generator for r(eR)");
  const Elem c = it->second;
  if (r.mul(c, c) != c || !left_semicentral_in_base(r, c))
    throw ContractViolation("annihilator generator " + r.label(c) + " is not a left semicentral idempotent");
  return c;
}

AnnihilatorCheck verify_annihilator_bounded(const SkewSeries& e, Elem c, unsigned degree, std::size_t brute_limit) {
  const SkewContext& ctx = e.context();
  const FiniteRing& r = ctx.base();
  const RingMorphism& alpha = ctx.alpha;
  const Elem e0 = e.coeff(0);
  AnnihilatorCheck out;
  out.degree = degree;

  ElementSet ann = right_annihilator(r, right_ideal(r, ElementSet(r, {e0})));
  ElementSet generated = right_ideal(r, ElementSet(r, {c}));
  out.base_ok = ann == generated;
  if (!out.base_ok) out.counterexample = "r(e0 R) != c R for e0 = " + r.label(e0) + ", c = " + r.label(c);

  ExactSeries f = e.exact();
  ExactSeries cs = monomial_series(c, 0);
  out.contains_ok = true;
  for (Elem g : r.additive_generators()) {
    for (unsigned t = 0; t <= degree && out.contains_ok; ++t) {
      ExactSeries p = exact_product(alpha, exact_product(alpha, f, monomial_series(g, t)), cs);
      if (!is_zero_series(r, p)) {
        out.contains_ok = false;
        out.counterexample = "e * (" + r.label(g) + " x^" + std::to_string(t) + ") * c = " + describe_series(r, p);
      }
    }
  }

  // Reduction: a polynomial is killed by e R[x] iff each coefficient lies in
  // r(e_0 R). Needs r(e_0 R) stable under alpha and killed by every e_i R.
  out.reduction_ok = true;
  auto ann_gens = ideal_generators(r, ann);
  const std::size_t powers = alpha.preperiod() + alpha.period();
  for (Elem a : ann_gens) {
    for (std::size_t l = 1; l < powers && out.reduction_ok; ++l) {
      if (!ann.contains(alpha.power(a, static_cast<long>(l)))) {
        out.reduction_ok = false;
        out.counterexample = "alpha^" + std::to_string(l) + "(" + r.label(a) + ") leaves r(e0 R)";
      }
    }
    for (long k = ctx.low(); k <= ctx.high() && out.reduction_ok; ++k) {
      Elem ek = e.coeff(k);
      for (Elem g : r.additive_generators()) {
        if (r.mul(ek, r.mul(g, a)) != r.zero()) {
          out.reduction_ok = false;
          out.counterexample = "e_" + std::to_string(k) + " * " + r.label(g) + " * " + r.label(a) + " != 0";
          break;
        }
      }
    }
  }

  const std::size_t n = r.order();
  std::size_t total = checked_power(n, degree + 1, brute_limit);
  if (brute_limit > 0 && total <= brute_limit) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      ExactSeries p = decode_poly(idx, n, degree);
      bool killed = true;
      for (Elem g : r.additive_generators()) {
        for (unsigned t = 0; t <= degree && killed; ++t)
          killed = is_zero_series(r, exact_product(alpha, exact_product(alpha, f, monomial_series(g, t)), p));
        if (!killed) break;
      }
      bool reduced = std::all_of(p.coeffs.begin(), p.coeffs.end(), [&](Elem a) { return ann.contains(a); });
      ++out.brute_checked;
      if (killed != reduced) {
        out.brute_ok = false;
        out.counterexample = "direct annihilator test disagrees on p = " + describe_series(r, p);
        break;
      }
    }
  }
  return out;
}

ConverseCheck converse_restriction(const IdempotentEnumeration& extension, Elem e0, unsigned degree) {
  ConverseCheck out;
  if (extension.items.empty()) {
    out.detail = "no extension idempotents";
    return out;
  }
  const SkewContext& ctx = extension.items.front().context();
  const FiniteRing& r = ctx.base();
  ElementSet ann = right_annihilator(r, right_ideal(r, ElementSet(r, {e0})));
  auto ann_gens = ideal_generators(r, ann);
  out.ok = true;
  for (const SkewSeries& cand : extension.items) {
    ExactSeries cx = cand.exact();
    bool kills = true;
    for (Elem g : r.additive_generators()) {
      for (unsigned t = 0; t <= degree && kills; ++t)
        kills = is_zero_series(r, exact_product(ctx.alpha, monomial_series(r.mul(e0, g), t), cx));
      if (!kills) break;
    }
    if (!kills) continue;
    bool fixes = std::all_of(ann_gens.begin(), ann_gens.end(), [&](Elem a) {
      return same_series(r, exact_product(ctx.alpha, cx, monomial_series(a, 0)), monomial_series(a, 0));
    });
    if (!fixes) continue;
    ++out.candidates;
    Elem c0 = cand.coeff(0);
    if (!(right_ideal(r, ElementSet(r, {c0})) == ann)) {
      out.ok = false;
      out.detail = "extension generator " + cand.describe() + " restricts to " + r.label(c0) +
                   " but r(e0 R) != c0 R";
      return out;
    }
  }
  if (out.candidates == 0) {
    out.ok = false;
    out.detail = "no extension idempotent generates the annihilator of " + r.label(e0) + " R[x]";
  }
  return out;
}

JordanPair normalize(const RingMorphism& alpha, JordanPair p) {
  if (!alpha.is_automorphism()) return p;
  return JordanPair{0, alpha.power(p.a, -static_cast<long>(p.i))};
}

JordanPair pair_product(const RingMorphism& alpha, JordanPair p, JordanPair q) {
  const FiniteRing& r = *alpha.ring();
  return JordanPair{p.i + q.i, r.mul(alpha.power(p.a, q.i), alpha.power(q.a, p.i))};
}

LaurentSuiteResult laurent_window_suite(const RingMorphism& alpha, unsigned window, std::size_t search_cap) {
  if (!alpha.is_automorphism()) throw PreconditionError("Laurent suite needs a bijective endomorphism");
  const FiniteRing& r = *alpha.ring();
  const std::size_t n = r.order();
  const auto gens = r.additive_generators();
  LaurentSuiteResult out;
  out.window = window;
  const long w = static_cast<long>(window);

  // (a) x^-i a x^i computed in Laurent arithmetic is the constant alpha^-i(a),
  // and pair products agree with the displayed formula.
  out.normalization_ok = true;
  for (long i = 0; i <= w && out.normalization_ok; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      auto ea = static_cast<Elem>(a);
      ExactSeries v = exact_product(alpha, exact_product(alpha, monomial_series(r.one(), -i), monomial_series(ea, 0)),
                                    monomial_series(r.one(), i));
      JordanPair np = normalize(alpha, {static_cast<unsigned>(i), ea});
      if (np.i != 0 || !same_series(r, v, monomial_series(np.a, 0))) {
        out.normalization_ok = false;
        out.counterexample = "x^-" + std::to_string(i) + " " + r.label(ea) + " x^" + std::to_string(i) +
                             " does not normalize to a constant";
        break;
      }
    }
  }
  const bool all_pairs = n * n * (window + 1) * (window + 1) <= (1u << 20);
  std::vector<Elem> sample;
  if (all_pairs) {
    for (std::size_t a = 0; a < n; ++a) sample.push_back(static_cast<Elem>(a));
  } else {
    sample.assign(gens.begin(), gens.end());
  }
  auto formula_holds = [&] {
    for (unsigned i = 0; i <= window; ++i)
      for (unsigned j = 0; j <= window; ++j)
        for (Elem a : sample)
          for (Elem b : sample) {
            JordanPair pq = pair_product(alpha, {i, a}, {j, b});
            Elem direct = r.mul(alpha.power(a, -static_cast<long>(i)), alpha.power(b, -static_cast<long>(j)));
            if (normalize(alpha, pq).a != direct) {
              out.counterexample = "pair product formula fails at i=" + std::to_string(i) + ", j=" + std::to_string(j);
              return false;
            }
          }
    return true;
  };
  if (out.normalization_ok) out.normalization_ok = formula_holds();

  // (b) e in S_l(R) iff x^-i e x^i in S_l(A), products taken in pair form.
  out.semicentral_equivalence_ok = true;
  for (Elem e : idempotents(r).members()) {
    bool base_side = left_semicentral_in_base(r, e);
    for (unsigned i = 0; i <= window; ++i) {
      JordanPair s{i, e};
      bool pair_side = true;
      for (unsigned j = 0; j <= window && pair_side; ++j)
        for (Elem g : gens) {
          JordanPair q{j, g};
          JordanPair lhs = pair_product(alpha, q, s);
          JordanPair rhs = pair_product(alpha, s, pair_product(alpha, q, s));
          if (normalize(alpha, lhs) != normalize(alpha, rhs)) {
            pair_side = false;
            break;
          }
        }
      if (pair_side != base_side) {
        out.semicentral_equivalence_ok = false;
        out.counterexample = "semicentrality of " + r.label(e) + " changes at i=" + std::to_string(i);
      }
    }
  }

  // (c) Laurent idempotents with exponents in [-W, W] are constant.
  if (!is_semicommutative(r) || !is_alpha_compatible(alpha)) return out;
  const std::size_t width = 2 * window + 1;
  std::vector<Elem> coeffs(width, r.zero());
  std::size_t nodes = 0;
  bool all_constant = true;
  auto coeff_at = [&](long k) { return coeffs[static_cast<std::size_t>(k + w)]; };
  // Coefficient of x^s in e*e using exponents <= limit only.
  auto square_coeff = [&](long s) {
    Elem acc = r.zero();
    for (long i = -w; i <= w; ++i) {
      long j = s - i;
      if (j < -w || j > w) continue;
      acc = r.add(acc, r.mul(coeff_at(i), alpha.power(coeff_at(j), i)));
    }
    return acc;
  };
  auto expected = [&](long s) { return (s >= -w && s <= w) ? coeff_at(s) : r.zero(); };
  auto dfs = [&](auto&& self, std::size_t pos) -> void {
    if (out.search_truncated) return;
    if (++nodes > search_cap) {
      out.search_truncated = true;
      return;
    }
    if (pos == width) {
      for (long s = 1; s <= 2 * w; ++s)
        if (square_coeff(s) != expected(s)) return;
      ++out.laurent_idempotents;
      for (long k = -w; k <= w; ++k)
        if (k != 0 && coeff_at(k) != r.zero()) {
          if (all_constant) {
            ExactSeries f{-w, coeffs};
            out.counterexample = "nonconstant Laurent idempotent " + describe_series(r, f);
          }
          all_constant = false;
        }
      return;
    }
    for (std::size_t a = 0; a < n; ++a) {
      coeffs[pos] = static_cast<Elem>(a);
      long s = static_cast<long>(pos) - 2 * w;  // exponent fully determined now
      if (square_coeff(s) == expected(s)) self(self, pos + 1);
      if (out.search_truncated) break;
    }
    coeffs[pos] = r.zero();
  };
  dfs(dfs, 0);
  out.idempotents_constant = all_constant;
  return out;
}

namespace {

// Bivariate series over R with commuting variables, dense (n1+1) x (n2+1).
struct Bivariate {
  unsigned n1 = 0, n2 = 0;
  std::vector<Elem> c;
  Elem at(unsigned a, unsigned b) const { return c[a * (n2 + 1) + b]; }
  Elem& at(unsigned a, unsigned b) { return c[a * (n2 + 1) + b]; }
};

Bivariate bivariate_zero(const FiniteRing& r, unsigned n1, unsigned n2) {
  return Bivariate{n1, n2, std::vector<Elem>((n1 + 1) * (n2 + 1), r.zero())};
}

// Product truncated to the dimensions of `out_dims`.
Bivariate bivariate_product(const FiniteRing& r, const Bivariate& f, const Bivariate& g, unsigned n1, unsigned n2) {
  Bivariate out = bivariate_zero(r, n1, n2);
  for (unsigned a = 0; a <= f.n1; ++a)
    for (unsigned b = 0; b <= f.n2; ++b) {
      Elem x = f.at(a, b);
      if (x == r.zero()) continue;
      for (unsigned c = 0; c <= g.n1 && a + c <= n1; ++c)
        for (unsigned d = 0; d <= g.n2 && b + d <= n2; ++d)
          out.at(a + c, b + d) = r.add(out.at(a + c, b + d), r.mul(x, g.at(c, d)));
    }
  return out;
}

bool bivariate_is_zero(const FiniteRing& r, const Bivariate& f) {
  return std::all_of(f.c.begin(), f.c.end(), [&](Elem a) { return a == r.zero(); });
}

Bivariate bivariate_monomial(const FiniteRing& r, Elem a, unsigned i, unsigned j) {
  Bivariate m = bivariate_zero(r, i, j);
  m.at(i, j) = a;
  return m;
}

std::string describe_bivariate(const FiniteRing& r, const Bivariate& f) {
  std::ostringstream out;
  bool first = true;
  for (unsigned a = 0; a <= f.n1; ++a)
    for (unsigned b = 0; b <= f.n2; ++b) {
      if (f.at(a, b) == r.zero()) continue;
      if (!first) out << " + ";
      first = false;
      out << r.label(f.at(a, b)) << "*x1^" << a << "*x2^" << b;
    }
  if (first) out << r.label(r.zero());
  return out.str();
}

}  // namespace

MultivarSuiteResult multivar_suite(const RingPtr& base, unsigned n1, unsigned n2, std::size_t cap) {
  const FiniteRing& r = *base;
  MultivarSuiteResult out;
  out.n1 = n1;
  out.n2 = n2;

  // Monomials ordered by total degree, then by the first exponent.
  std::vector<std::pair<unsigned, unsigned>> order;
  for (unsigned a = 0; a <= n1; ++a)
    for (unsigned b = 0; b <= n2; ++b) order.emplace_back(a, b);
  std::stable_sort(order.begin(), order.end(),
                   [](auto x, auto y) { return x.first + x.second < y.first + y.second; });

  detail::LinearSolver solver(r);
  std::vector<Bivariate> found;
  Bivariate cur = bivariate_zero(r, n1, n2);
  auto dfs = [&](auto&& self, std::size_t pos) -> void {
    if (out.truncated) return;
    if (pos == order.size()) {
      if (found.size() >= cap) {
        out.truncated = true;
        return;
      }
      found.push_back(cur);
      return;
    }
    auto [a, b] = order[pos];
    Elem s = r.zero();
    for (unsigned i = 0; i <= a; ++i)
      for (unsigned j = 0; j <= b; ++j) {
        if ((i == 0 && j == 0) || (i == a && j == b)) continue;
        s = r.add(s, r.mul(cur.at(i, j), cur.at(a - i, b - j)));
      }
    Elem e0 = cur.at(0, 0);
    for (Elem y : solver.solutions(e0, e0, s)) {
      cur.at(a, b) = y;
      self(self, pos + 1);
      if (out.truncated) return;
    }
    cur.at(a, b) = r.zero();
  };
  for (Elem e0 : idempotents(r).members()) {
    cur = bivariate_zero(r, n1, n2);
    cur.at(0, 0) = e0;
    dfs(dfs, 1);
    if (out.truncated) break;
  }
  out.idempotents = found.size();

  CpBaerResult cp = right_cp_baer(r);
  if (cp.holds) out.annihilator_ok = true;
  out.membership_ok = true;
  out.structure_ok = true;
  const auto gens = r.additive_generators();
  auto note = [&](const std::string& s) {
    if (out.counterexample.empty()) out.counterexample = s;
  };

  for (const Bivariate& e : found) {
    const Elem e0 = e.at(0, 0);
    bool constant = true;
    for (std::size_t k = 1; k < e.c.size(); ++k)
      if (e.c[k] != r.zero()) constant = false;
    if (!constant) ++out.nonconstant;

    ElementSet ideal = two_sided_ideal(r, ElementSet(r, {e0}));
    for (Elem x : e.c)
      if (!ideal.contains(x)) {
        out.membership_ok = false;
        note("coefficient outside R e0 R in " + describe_bivariate(r, e));
      }

    bool semicentral = true;
    for (Elem g : gens)
      for (unsigned a = 0; a <= n1 && semicentral; ++a)
        for (unsigned b = 0; b <= n2 && semicentral; ++b) {
          Bivariate m = bivariate_monomial(r, g, a, b);
          Bivariate me = bivariate_product(r, m, e, n1, n2);
          Bivariate eme = bivariate_product(r, e, me, n1, n2);
          semicentral = me.c == eme.c;
        }
    if (semicentral) {
      ++out.left_semicentral;
      Bivariate c0 = bivariate_monomial(r, e0, 0, 0);
      bool ok = left_semicentral_in_base(r, e0) && bivariate_product(r, c0, e, n1, n2).c == e.c;
      Bivariate ec0 = bivariate_product(r, e, c0, n1, n2);
      Bivariate want = bivariate_zero(r, n1, n2);
      want.at(0, 0) = e0;
      ok = ok && ec0.c == want.c;
      if (!ok) {
        out.structure_ok = false;
        note("semicentral structure fails for " + describe_bivariate(r, e));
      }
    }

    if (!cp.holds) continue;
    const Elem c = cp.witness.at(e0);
    ElementSet ann = right_annihilator(r, right_ideal(r, ElementSet(r, {e0})));
    bool ok = ann == right_ideal(r, ElementSet(r, {c}));
    for (Elem g : gens)
      for (unsigned a = 0; a <= n1 && ok; ++a)
        for (unsigned b = 0; b <= n2 && ok; ++b) {
          Bivariate p = bivariate_product(r, bivariate_product(r, e, bivariate_monomial(r, g, a, b), 2 * n1, 2 * n2),
                                          bivariate_monomial(r, c, 0, 0), 2 * n1, 2 * n2);
          ok = bivariate_is_zero(r, p);
        }
    // Equation (*): every coefficient of e kills R r(e0 R) from the left.
    for (Elem a : ideal_generators(r, ann))
      for (Elem x : e.c)
        for (Elem g : gens)
          if (r.mul(x, r.mul(g, a)) != r.zero()) ok = false;
    if (!ok) {
      out.annihilator_ok = false;
      note("annihilator of " + describe_bivariate(r, e) + " R[x1,x2] is not c R[x1,x2] with c = " + r.label(c));
    }
  }
  return out;
}

SpaCheck spa_bounded_check(const RingMorphism& alpha, unsigned degree, std::uint64_t seed,
                           std::size_t exhaustive_limit, std::size_t samples) {
  const FiniteRing& r = *alpha.ring();
  const std::size_t n = r.order();
  const std::size_t polys = checked_power(n, degree + 1, std::size_t{1} << 40);
  SpaCheck out;

  auto test = [&](const ExactSeries& f, const ExactSeries& g) {
    bool product_zero = is_zero_series(r, exact_product(alpha, f, g));
    bool pairwise_zero = true;
    for (Elem a : f.coeffs)
      for (Elem b : g.coeffs)
        if (r.mul(a, b) != r.zero()) pairwise_zero = false;
    ++out.pairs;
    if (product_zero != pairwise_zero) {
      out.holds = false;
      out.witness = std::pair{f, g};
      return false;
    }
    return true;
  };

  if (polys <= exhaustive_limit / std::max<std::size_t>(polys, 1)) {
    for (std::size_t i = 0; i < polys; ++i) {
      ExactSeries f = decode_poly(i, n, degree);
      for (std::size_t j = 0; j < polys; ++j)
        if (!test(f, decode_poly(j, n, degree))) return out;
    }
    return out;
  }
  out.sampled = true;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto random_poly = [&] {
    ExactSeries f;
    f.coeffs.resize(degree + 1);
    for (auto& c : f.coeffs) c = static_cast<Elem>(pick(rng));
    return f;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    ExactSeries f = random_poly();
    ExactSeries g = random_poly();
    if (!test(f, g)) return out;
  }
  return out;
}

NilpotentWitnessSearch nilpotent_witness_search(const RingMorphism& alpha, unsigned degree, std::size_t limit) {
  const FiniteRing& r = *alpha.ring();
  const std::size_t n = r.order();
  const auto gens = r.additive_generators();
  NilpotentWitnessSearch out;

  auto kills_itself = [&](const ExactSeries& f) {
    for (Elem g : gens)
      for (unsigned t = 0; t <= degree; ++t) {
        ExactSeries p = exact_product(alpha, exact_product(alpha, f, monomial_series(g, t)), f);
        if (!is_zero_series(r, p)) return false;
      }
    return true;
  };

  std::size_t total = checked_power(n, degree + 1, limit);
  if (total <= limit) {
    out.exhaustive = true;
    for (std::size_t idx = 1; idx < total; ++idx) {
      ExactSeries f = decode_poly(idx, n, degree);
      if (is_zero_series(r, f)) continue;
      ++out.checked;
      if (kills_itself(f)) {
        out.found = true;
        out.witness = trimmed(r, f);
        return out;
      }
    }
    return out;
  }
  // Sparse candidates a x^i + b x^j with i < j, then single terms.
  for (unsigned i = 0; i <= degree; ++i)
    for (std::size_t a = 0; a < n; ++a) {
      if (static_cast<Elem>(a) == r.zero()) continue;
      ExactSeries f{static_cast<long>(i), {static_cast<Elem>(a)}};
      ++out.checked;
      if (kills_itself(f)) {
        out.found = true;
        out.witness = f;
        return out;
      }
    }
  for (unsigned i = 0; i <= degree; ++i)
    for (unsigned j = i + 1; j <= degree; ++j)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          if (static_cast<Elem>(a) == r.zero() || static_cast<Elem>(b) == r.zero()) continue;
          ExactSeries f{static_cast<long>(i), std::vector<Elem>(j - i + 1, r.zero())};
          f.coeffs.front() = static_cast<Elem>(a);
          f.coeffs.back() = static_cast<Elem>(b);
          if (is_zero_series(r, f)) continue;
          ++out.checked;
          if (kills_itself(f)) {
            out.found = true;
            out.witness = trimmed(r, f);
            return out;
          }
        }
  return out;
}

}  // namespace cpb
