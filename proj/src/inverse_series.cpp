#include "cpb/inverse_series.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "cpb/errors.hpp"
#include "linear_solver.hpp"

namespace cpb {

namespace {

std::vector<Elem> alpha_inverse_table(const RingMorphism& alpha) {
  if (!alpha.is_automorphism()) throw PreconditionError("inverse series need a bijective alpha");
  auto t = alpha.power_table(-1);
  return {t.begin(), t.end()};
}

bool left_semicentral_in_base(const FiniteRing& r, Elem e) {
  for (Elem g : r.additive_generators()) {
    Elem ge = r.mul(g, e);
    if (ge != r.mul(e, ge)) return false;
  }
  return true;
}

std::vector<Elem> subgroup_generators(const FiniteRing& r, const ElementSet& s) {
  auto members = s.members();
  std::vector<Elem> gens;
  additive_span(r, members, &gens);
  return gens;
}

std::size_t capped_power(std::size_t n, unsigned e, std::size_t limit) {
  std::size_t p = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (p > limit / std::max<std::size_t>(n, 1)) return limit + 1;
    p *= n;
  }
  return p;
}

InverseSeries decode(const InverseContextPtr& ctx, std::size_t index, unsigned degree) {
  InverseSeries f = InverseSeries::zero(ctx);
  const std::size_t n = ctx->base().order();
  for (unsigned k = 0; k <= degree; ++k) {
    f.coeffs[k] = static_cast<Elem>(index % n);
    index /= n;
  }
  return f;
}

// Copy of e into a context with a larger bound.
InverseSeries embed(const InverseSeries& e, const InverseContextPtr& wider) {
  InverseSeries out = InverseSeries::zero(wider);
  for (std::size_t i = 0; i < e.coeffs.size() && i < out.coeffs.size(); ++i) out.coeffs[i] = e.coeffs[i];
  return out;
}

}  // namespace

std::vector<Elem> xinv_times(const AlphaDerivation& delta, Elem a, unsigned terms) {
  const FiniteRing& r = *delta.ring();
  auto inv = delta.alpha().power_table(-1);  // throws for non-bijective alpha
  std::vector<Elem> out;
  out.reserve(terms);
  Elem t = a;  // T^(i-1)(a)
  for (unsigned i = 0; i < terms; ++i) {
    out.push_back(inv[t]);
    t = r.neg(delta(inv[t]));
  }
  return out;
}

std::vector<Elem> x_times(const AlphaDerivation& delta, const std::vector<Elem>& c) {
  const FiniteRing& r = *delta.ring();
  std::vector<Elem> out(c.size() + 1, r.zero());
  // x (c_i x^-i) = alpha(c_i) x^-(i-1) + delta(c_i) x^-i, with c[0] the x^-1 coefficient.
  for (std::size_t k = 0; k < c.size(); ++k) {
    std::size_t i = k + 1;
    out[i - 1] = r.add(out[i - 1], delta.alpha()(c[k]));
    out[i] = r.add(out[i], delta(c[k]));
  }
  return out;
}

InverseContext::InverseContext(AlphaDerivation delta, unsigned bound)
    : delta_(std::move(delta)), bound_(bound), alpha_inv_(alpha_inverse_table(delta_.alpha())) {
  const FiniteRing& r = base();
  const std::size_t n = r.order();
  const std::size_t width = bound_ + 1;
  // xinv[c][m] = coefficient of x^-m in x^-1 c.
  std::vector<std::vector<Elem>> xinv(n, std::vector<Elem>(width, r.zero()));
  for (std::size_t c = 0; c < n; ++c) {
    auto terms = xinv_times(delta_, static_cast<Elem>(c), bound_);
    for (unsigned m = 1; m <= bound_; ++m) xinv[c][m] = terms[m - 1];
  }
  table_.assign(width, std::vector<std::vector<Elem>>(n, std::vector<Elem>(width, r.zero())));
  for (std::size_t b = 0; b < n; ++b) table_[0][b][0] = static_cast<Elem>(b);
  for (unsigned i = 1; i <= bound_; ++i)
    for (std::size_t b = 0; b < n; ++b) {
      const auto& prev = table_[i - 1][b];
      auto& cur = table_[i][b];
      for (unsigned k = 0; k <= bound_; ++k) {
        if (prev[k] == r.zero()) continue;
        for (unsigned m = 1; m + k <= bound_; ++m) cur[m + k] = r.add(cur[m + k], xinv[prev[k]][m]);
      }
    }
}

Elem InverseContext::twist(Elem a) const { return base().neg(delta_(alpha_inv_[a])); }

InverseContextPtr make_inverse_context(AlphaDerivation delta, unsigned bound) {
  return std::make_shared<const InverseContext>(std::move(delta), bound);
}

InverseSeries InverseSeries::zero(InverseContextPtr ctx) {
  InverseSeries s;
  s.coeffs.assign(ctx->bound() + 1, ctx->base().zero());
  s.ctx = std::move(ctx);
  return s;
}

InverseSeries InverseSeries::monomial(InverseContextPtr ctx, Elem a, unsigned i) {
  InverseSeries s = zero(std::move(ctx));
  if (i <= s.ctx->bound()) s.coeffs[i] = a;
  return s;
}

bool InverseSeries::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [&](Elem a) { return a == ctx->base().zero(); });
}

std::string InverseSeries::describe() const {
  const FiniteRing& r = ctx->base();
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == r.zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << r.label(coeffs[i]);
    if (i > 0) out << "*x^-" << i;
  }
  if (first) out << r.label(r.zero());
  return out.str();
}

InverseSeries inv_add(const InverseSeries& f, const InverseSeries& g) {
  if (f.ctx != g.ctx) throw StructuralError("inverse series from different contexts");
  InverseSeries out = InverseSeries::zero(f.ctx);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = f.ctx->base().add(f.coeffs[i], g.coeffs[i]);
  return out;
}

InverseSeries inv_mul(const InverseSeries& f, const InverseSeries& g) {
  if (f.ctx != g.ctx) throw StructuralError("inverse series from different contexts");
  const InverseContext& ctx = *f.ctx;
  const FiniteRing& r = ctx.base();
  const unsigned top = ctx.bound();
  InverseSeries out = InverseSeries::zero(f.ctx);
  for (unsigned i = 0; i <= top; ++i) {
    Elem fi = f.coeffs[i];
    if (fi == r.zero()) continue;
    for (unsigned j = 0; i + j <= top; ++j) {
      if (g.coeffs[j] == r.zero()) continue;
      const auto& row = ctx.shifted(i, g.coeffs[j]);
      for (unsigned m = i; m + j <= top; ++m)
        out.coeffs[m + j] = r.add(out.coeffs[m + j], r.mul(fi, row[m]));
    }
  }
  return out;
}

namespace {
bool inv_is_idempotent(const InverseSeries& e) { return inv_mul(e, e) == e; }
}  // namespace

InverseIdempotents inv_idempotents(const InverseContextPtr& ctx, std::size_t cap) {
  if (!is_compatible(ctx->delta()))
    throw PreconditionError("inverse-series idempotents need an (alpha, delta)-compatible base");
  const FiniteRing& r = ctx->base();
  const RingMorphism& alpha = ctx->alpha();
  const unsigned top = ctx->bound();
  InverseIdempotents out;
  detail::LinearSolver solver(r);
  InverseSeries cur = InverseSeries::zero(ctx);

  // Coefficient k of cur*cur using only cur_0 .. cur_k (cur_k assumed zero by caller).
  auto square_coeff = [&](unsigned k) {
    Elem acc = r.zero();
    for (unsigned i = 0; i <= k; ++i) {
      if (cur.coeffs[i] == r.zero()) continue;
      for (unsigned j = 0; i + j <= k; ++j) {
        if (cur.coeffs[j] == r.zero()) continue;
        acc = r.add(acc, r.mul(cur.coeffs[i], ctx->shifted(i, cur.coeffs[j])[k - j]));
      }
    }
    return acc;
  };

  auto dfs = [&](auto&& self, unsigned k) -> void {
    if (out.truncated) return;
    if (k > top) {
      if (out.items.size() >= cap) {
        out.truncated = true;
        return;
      }
      if (!inv_is_idempotent(cur)) throw ContractViolation("coefficient solver produced a non-idempotent " + cur.describe());
      out.items.push_back(cur);
      return;
    }
    cur.coeffs[k] = r.zero();
    Elem s = square_coeff(k);
    Elem e0 = cur.coeffs[0];
    for (Elem y : solver.solutions(e0, alpha.power(e0, -static_cast<long>(k)), s)) {
      cur.coeffs[k] = y;
      self(self, k + 1);
      if (out.truncated) return;
    }
    cur.coeffs[k] = r.zero();
  };

  for (Elem e0 : idempotents(r).members()) {
    cur = InverseSeries::zero(ctx);
    cur.coeffs[0] = e0;
    dfs(dfs, 1);
    if (out.truncated) break;
  }
  return out;
}

bool inv_coefficients_in_ideal(const InverseSeries& e) {
  if (!inv_is_idempotent(e)) throw PreconditionError("not an idempotent: " + e.describe());
  const FiniteRing& r = e.ctx->base();
  ElementSet ideal = two_sided_ideal(r, ElementSet(r, {e.coeffs[0]}));
  return std::all_of(e.coeffs.begin(), e.coeffs.end(), [&](Elem a) { return ideal.contains(a); });
}

bool inv_is_left_semicentral_bounded(const InverseSeries& e) {
  const FiniteRing& r = e.ctx->base();
  for (Elem g : r.additive_generators())
    for (unsigned t = 0; t <= e.ctx->bound(); ++t) {
      InverseSeries m = InverseSeries::monomial(e.ctx, g, t);
      InverseSeries me = inv_mul(m, e);
      if (!(me == inv_mul(e, me))) return false;
    }
  return true;
}

InverseStructure inv_semicentral_structure(const InverseSeries& e) {
  if (!inv_is_left_semicentral_bounded(e)) throw PreconditionError("not left semicentral: " + e.describe());
  const FiniteRing& r = e.ctx->base();
  const Elem e0 = e.coeffs[0];
  InverseStructure s;
  s.constant_left_semicentral = left_semicentral_in_base(r, e0);
  s.absorbs_on_left = true;
  s.kills_on_right = true;
  for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
    if (r.mul(e0, e.coeffs[i]) != e.coeffs[i]) s.absorbs_on_left = false;
    if (i >= 1 && r.mul(e.coeffs[i], e0) != r.zero()) s.kills_on_right = false;
  }
  InverseSeries c0 = InverseSeries::monomial(e.ctx, e0, 0);
  s.same_right_ideal = inv_mul(c0, e) == e && inv_mul(e, c0) == c0;
  return s;
}

OrbitCheck operator_orbit_annihilation(const AlphaDerivation& delta, Elem e, Elem a, unsigned max_length) {
  const FiniteRing& r = *delta.ring();
  const RingMorphism& alpha = delta.alpha();
  const auto gens = r.additive_generators();
  auto kills = [&](Elem w) {
    return std::all_of(gens.begin(), gens.end(), [&](Elem g) { return r.mul(r.mul(e, g), w) == r.zero(); });
  };
  if (!kills(a)) throw PreconditionError("e R a != 0 for e = " + r.label(e) + ", a = " + r.label(a));
  std::vector<Elem> inverse;
  if (alpha.is_automorphism()) {
    auto t = alpha.power_table(-1);
    inverse.assign(t.begin(), t.end());
  }
  OrbitCheck out;
  std::vector<bool> seen(r.order(), false);
  std::vector<Elem> frontier{a};
  seen[a] = true;
  out.orbit_size = 1;
  while (!frontier.empty()) {
    if (out.depth == max_length) return out;
    ++out.depth;
    std::vector<Elem> next;
    for (Elem w : frontier) {
      std::vector<Elem> images{alpha(w), delta(w)};
      if (!inverse.empty()) images.push_back(inverse[w]);
      for (Elem v : images) {
        if (seen[v]) continue;
        seen[v] = true;
        ++out.orbit_size;
        next.push_back(v);
        if (!kills(v) && out.holds) {
          out.holds = false;
          out.failing = v;
        }
      }
    }
    frontier = std::move(next);
  }
  out.saturated = true;
  return out;
}

bool semicentral_stability(const InverseContextPtr& ctx, Elem c) {
  const FiniteRing& r = ctx->base();
  InverseSeries cs = InverseSeries::monomial(ctx, c, 0);
  for (unsigned k = 1; k <= ctx->bound(); ++k) {
    InverseSeries xk = InverseSeries::monomial(ctx, r.one(), k);
    InverseSeries rhs = inv_mul(xk, cs);
    if (!(inv_mul(cs, rhs) == rhs)) return false;
  }
  for (Elem g : r.additive_generators())
    for (unsigned t = 0; t <= ctx->bound(); ++t) {
      InverseSeries p = InverseSeries::monomial(ctx, g, t);
      InverseSeries pc = inv_mul(p, cs);
      if (!(inv_mul(cs, pc) == pc)) return false;
    }
  return true;
}

Thm24Result thm24_verify(const AlphaDerivation& delta, unsigned n, unsigned d, std::size_t brute_limit) {
  Thm24Result out;
  out.n = n;
  out.d = d;
  auto ctx = make_inverse_context(delta, n);
  auto wide = make_inverse_context(delta, std::max(n, d));
  const FiniteRing& r = ctx->base();
  const auto gens = r.additive_generators();
  InverseIdempotents idems = inv_idempotents(ctx);
  out.idempotents = idems.items.size();
  out.truncated = idems.truncated;
  auto note = [&](const std::string& s) {
    if (out.counterexample.empty()) out.counterexample = s;
  };

  CpBaerResult cp = right_cp_baer(r);
  if (cp.holds) out.annihilator_ok = true;
  const RingMorphism& alpha = delta.alpha();
  auto alpha_inv = alpha.power_table(-1);

  for (const InverseSeries& e : idems.items) {
    if (!inv_coefficients_in_ideal(e)) {
      out.membership_ok = false;
      note("coefficient outside R e0 R in " + e.describe());
    }
    if (inv_is_left_semicentral_bounded(e)) {
      ++out.left_semicentral;
      if (!inv_semicentral_structure(e).all()) {
        out.structure_ok = false;
        note("semicentral structure fails for " + e.describe());
      }
    }
    if (!cp.holds) continue;

    const Elem e0 = e.coeffs[0];
    const Elem c = cp.witness.at(e0);
    ElementSet ann = right_annihilator(r, right_ideal(r, ElementSet(r, {e0})));
    bool ok = ann == right_ideal(r, ElementSet(r, {c}));
    InverseSeries ew = embed(e, wide);
    InverseSeries cw = InverseSeries::monomial(wide, c, 0);
    for (Elem g : gens)
      for (unsigned t = 0; t <= d && ok; ++t)
        ok = inv_mul(inv_mul(ew, InverseSeries::monomial(wide, g, t)), cw).is_zero();
    // Reduction: r(e0 R) is stable under alpha, alpha^-1, delta and killed by every e_i R.
    for (Elem a : subgroup_generators(r, ann)) {
      if (!ann.contains(alpha(a)) || !ann.contains(alpha_inv[a]) || !ann.contains(delta(a))) ok = false;
      for (Elem x : e.coeffs)
        for (Elem g : gens)
          if (r.mul(x, r.mul(g, a)) != r.zero()) ok = false;
    }
    std::size_t total = capped_power(r.order(), d + 1, brute_limit);
    if (ok && brute_limit > 0 && total <= brute_limit) {
      for (std::size_t idx = 0; idx < total && ok; ++idx) {
        InverseSeries p = decode(wide, idx, d);
        bool killed = true;
        for (Elem g : gens) {
          for (unsigned t = 0; t <= d && killed; ++t)
            killed = inv_mul(inv_mul(ew, InverseSeries::monomial(wide, g, t)), p).is_zero();
          if (!killed) break;
        }
        bool reduced = std::all_of(p.coeffs.begin(), p.coeffs.end(), [&](Elem a) { return ann.contains(a); });
        ++out.brute_checked;
        if (killed != reduced) ok = false;
      }
    }
    if (!ok) {
      out.annihilator_ok = false;
      note("annihilator of " + e.describe() + " R[[x^-1]] is not c R[[x^-1]] with c = " + r.label(c));
    }
  }
  return out;
}

PrimeTransfer prime_transfer_bounded(const AlphaDerivation& delta, unsigned degree, std::size_t limit) {
  if (!is_alpha_compatible(delta.alpha())) throw PreconditionError("prime transfer needs an alpha-compatible base");
  PrimeTransfer out;
  out.degree = degree;
  auto ctx = make_inverse_context(delta, 2 * degree);
  const FiniteRing& r = ctx->base();
  const auto gens = r.additive_generators();
  out.base_prime = is_prime(r);
  out.base_semiprime = is_semiprime(r);

  auto kills = [&](const InverseSeries& f, const InverseSeries& g) {
    return std::all_of(gens.begin(), gens.end(), [&](Elem h) {
      return inv_mul(inv_mul(f, InverseSeries::monomial(ctx, h, 0)), g).is_zero();
    });
  };

  const std::size_t polys = capped_power(r.order(), degree + 1, limit);
  if (out.base_semiprime) {
    if (polys <= limit) {
      for (std::size_t i = 1; i < polys; ++i) {
        InverseSeries f = decode(ctx, i, degree);
        if (f.is_zero()) continue;
        ++out.checked;
        if (kills(f, f)) {
          out.semiprime_ok = false;
          out.counterexample = "f R f = 0 for f = " + f.describe();
          return out;
        }
      }
    } else {
      out.exhaustive = false;
    }
  }
  if (out.base_prime) {
    std::mt19937_64 rng(0);
    const bool all_pairs = polys <= limit / std::max<std::size_t>(polys, 1);
    if (!all_pairs) out.exhaustive = false;
    const std::size_t budget = all_pairs ? polys * polys : std::min<std::size_t>(limit, 200000);
    std::uniform_int_distribution<std::size_t> pick(1, std::min(polys, limit) - 1);
    for (std::size_t s = 0; s < budget; ++s) {
      std::size_t i = all_pairs ? s / polys : pick(rng);
      std::size_t j = all_pairs ? s % polys : pick(rng);
      InverseSeries f = decode(ctx, i, degree);
      InverseSeries g = decode(ctx, j, degree);
      if (f.is_zero() || g.is_zero()) continue;
      ++out.checked;
      if (kills(f, g)) {
        out.prime_ok = false;
        out.counterexample = "f R g = 0 for f = " + f.describe() + ", g = " + g.describe();
        return out;
      }
    }
  }
  return out;
}

}  // namespace cpb
