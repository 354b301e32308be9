#include "cpb/spec.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

#include "cpb/errors.hpp"

namespace cpb {

SpecError::SpecError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

bool operator==(const MorphismExpr& a, const MorphismExpr& b) {
  if (a.kind != b.kind || a.table != b.table) return false;
  if (!a.inner || !b.inner) return !a.inner && !b.inner;
  return *a.inner == *b.inner;
}

bool operator==(const RingExpr& a, const RingExpr& b) {
  if (a.kind != b.kind || a.ints != b.ints || a.family != b.family || a.ideal_generators != b.ideal_generators ||
      a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!(*a.children[i] == *b.children[i])) return false;
  if (!a.sigma || !b.sigma) return !a.sigma && !b.sigma;
  return *a.sigma == *b.sigma;
}

bool operator==(const RingSpec& a, const RingSpec& b) {
  auto same_ptr = [](const auto& x, const auto& y) { return (!x && !y) || (x && y && *x == *y); };
  return same_ptr(a.ring, b.ring) && same_ptr(a.alpha, b.alpha) && a.delta == b.delta && a.monoid == b.monoid;
}

namespace {

struct Token {
  enum class Kind { kWord, kOpen, kClose, kOpenBracket, kCloseBracket, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::size_t line = 1, column = 1;
};

class Lexer {
 public:
  Lexer(const std::string& text, std::size_t line, std::size_t column) : line_(line) {
    std::size_t i = 0;
    while (i < text.size()) {
      char ch = text[i];
      std::size_t col = column + i;
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
        continue;
      }
      auto single = [&](Token::Kind k) {
        tokens_.push_back({k, std::string(1, ch), line, col});
        ++i;
      };
      if (ch == '(') { single(Token::Kind::kOpen); continue; }
      if (ch == ')') { single(Token::Kind::kClose); continue; }
      if (ch == '[') { single(Token::Kind::kOpenBracket); continue; }
      if (ch == ']') { single(Token::Kind::kCloseBracket); continue; }
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' &&
             text[j] != ')' && text[j] != '[' && text[j] != ']')
        ++j;
      tokens_.push_back({Token::Kind::kWord, text.substr(i, j - i), line, col});
      i = j;
    }
    end_column_ = column + text.size();
  }

  const Token& peek() const {
    static Token end;
    if (pos_ < tokens_.size()) return tokens_[pos_];
    end = Token{Token::Kind::kEnd, "", line_, end_column_};
    return end;
  }
  Token next() {
    Token t = peek();
    if (pos_ < tokens_.size()) ++pos_;
    return t;
  }
  bool done() const { return pos_ >= tokens_.size(); }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw SpecError(t.line, t.column, message);
  }

  Token expect(Token::Kind kind, const std::string& what) {
    Token t = next();
    if (t.kind != kind) fail(t, "expected " + what + (t.text.empty() ? " at end of input" : ", found '" + t.text + "'"));
    return t;
  }

  std::string word(const std::string& what) { return expect(Token::Kind::kWord, what).text; }

  unsigned integer(const std::string& what) {
    Token t = expect(Token::Kind::kWord, what);
    if (t.text.empty() || t.text.size() > 9 ||
        !std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail(t, "expected " + what + ", found '" + t.text + "'");
    return static_cast<unsigned>(std::stoul(t.text));
  }

  std::vector<Elem> id_list(const std::string& what) {
    expect(Token::Kind::kOpenBracket, "'[' opening " + what);
    std::vector<Elem> out;
    while (peek().kind == Token::Kind::kWord) {
      Token t = peek();
      unsigned v = integer("element id");
      if (v > 0xFFFF) fail(t, "element id out of range");
      out.push_back(static_cast<Elem>(v));
    }
    expect(Token::Kind::kCloseBracket, "']' closing " + what);
    return out;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t end_column_ = 1;
};

std::shared_ptr<const MorphismExpr> parse_morphism(Lexer& lx);

std::shared_ptr<const MorphismExpr> parse_morphism_atom(Lexer& lx) {
  if (lx.peek().kind == Token::Kind::kOpen) {
    lx.next();
    auto m = parse_morphism(lx);
    lx.expect(Token::Kind::kClose, "')'");
    return m;
  }
  Token t = lx.peek();
  if (t.kind == Token::Kind::kWord && (t.text == "identity" || t.text == "frobenius" || t.text == "swap"))
    return parse_morphism(lx);
  lx.fail(t, "expected a morphism (identity, frobenius, swap, or a parenthesized expression)");
}

std::shared_ptr<const MorphismExpr> parse_morphism(Lexer& lx) {
  if (lx.peek().kind == Token::Kind::kOpen) return parse_morphism_atom(lx);
  Token t = lx.expect(Token::Kind::kWord, "a morphism");
  auto m = std::make_shared<MorphismExpr>();
  m->line = t.line;
  m->column = t.column;
  if (t.text == "identity") {
    m->kind = MorphismExpr::Kind::kIdentity;
  } else if (t.text == "frobenius") {
    m->kind = MorphismExpr::Kind::kFrobenius;
  } else if (t.text == "swap") {
    m->kind = MorphismExpr::Kind::kSwap;
  } else if (t.text == "table") {
    m->kind = MorphismExpr::Kind::kTable;
    m->table = lx.id_list("the image table");
  } else if (t.text == "extend") {
    m->kind = MorphismExpr::Kind::kExtend;
    m->inner = parse_morphism_atom(lx);
  } else if (t.text == "inverse") {
    m->kind = MorphismExpr::Kind::kInverse;
    m->inner = parse_morphism_atom(lx);
  } else {
    lx.fail(t, "unknown morphism '" + t.text + "'");
  }
  return m;
}

std::shared_ptr<const RingExpr> parse_ring(Lexer& lx);

std::shared_ptr<const RingExpr> parse_ring_atom(Lexer& lx) {
  lx.expect(Token::Kind::kOpen, "'(' around a ring argument");
  auto r = parse_ring(lx);
  lx.expect(Token::Kind::kClose, "')'");
  return r;
}

std::shared_ptr<const RingExpr> parse_ring(Lexer& lx) {
  if (lx.peek().kind == Token::Kind::kOpen) return parse_ring_atom(lx);
  Token t = lx.expect(Token::Kind::kWord, "a ring constructor");
  auto e = std::make_shared<RingExpr>();
  e->line = t.line;
  e->column = t.column;
  if (t.text == "zmod") {
    e->kind = RingExpr::Kind::kZmod;
    e->ints = {lx.integer("the modulus")};
  } else if (t.text == "field") {
    e->kind = RingExpr::Kind::kField;
    unsigned p = lx.integer("the characteristic");
    e->ints = {p, lx.integer("the degree")};
  } else if (t.text == "product") {
    e->kind = RingExpr::Kind::kProduct;
    e->children.push_back(parse_ring_atom(lx));
    e->children.push_back(parse_ring_atom(lx));
  } else if (t.text == "matrix" || t.text == "upper_triangular") {
    e->kind = t.text == "matrix" ? RingExpr::Kind::kMatrix : RingExpr::Kind::kUpperTriangular;
    e->ints = {lx.integer("the size")};
    e->children.push_back(parse_ring_atom(lx));
  } else if (t.text == "skew_triangular") {
    e->kind = RingExpr::Kind::kSkewTriangular;
    Token ft = lx.peek();
    auto fam = family_from_tag(lx.word("a family tag"));
    if (!fam) lx.fail(ft, "unknown family '" + ft.text + "' (expected Tn, S, T, A or B)");
    e->family = *fam;
    e->ints = {lx.integer("the size")};
    e->children.push_back(parse_ring_atom(lx));
    e->sigma = parse_morphism_atom(lx);
  } else if (t.text == "quotient") {
    e->kind = RingExpr::Kind::kQuotient;
    e->children.push_back(parse_ring_atom(lx));
    e->ideal_generators = lx.id_list("the ideal generators");
  } else {
    lx.fail(t, "unknown constructor '" + t.text + "'");
  }
  return e;
}

DeltaExpr parse_delta(Lexer& lx) {
  Token t = lx.expect(Token::Kind::kWord, "a derivation");
  DeltaExpr d;
  d.line = t.line;
  d.column = t.column;
  if (t.text == "zero") {
    d.kind = DeltaExpr::Kind::kZero;
  } else if (t.text == "inner") {
    d.kind = DeltaExpr::Kind::kInner;
    unsigned v = lx.integer("the inner element");
    if (v > 0xFFFF) lx.fail(t, "element id out of range");
    d.element = static_cast<Elem>(v);
  } else if (t.text == "table") {
    d.kind = DeltaExpr::Kind::kTable;
    d.table = lx.id_list("the derivation table");
  } else {
    lx.fail(t, "unknown derivation '" + t.text + "' (expected zero, inner or table)");
  }
  return d;
}

std::pair<std::int64_t, std::int64_t> parse_rational(Lexer& lx) {
  Token t = lx.expect(Token::Kind::kWord, "a non-negative rational");
  auto slash = t.text.find('/');
  auto digits = [](const std::string& s) {
    return !s.empty() && s.size() <= 15 &&
           std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  std::string num = t.text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.text.substr(slash + 1);
  if (!digits(num) || !digits(den)) lx.fail(t, "expected a non-negative rational, found '" + t.text + "'");
  std::int64_t a = std::stoll(num), b = std::stoll(den);
  if (b == 0) lx.fail(t, "zero denominator");
  std::int64_t g = std::gcd(a, b);
  if (a == 0) return {0, 1};
  return {a / g, b / g};
}

MonoidExpr parse_monoid(Lexer& lx) {
  Token t = lx.expect(Token::Kind::kWord, "a monoid family");
  MonoidExpr m;
  if (t.text == "naturals") {
    m.rank = lx.integer("the rank");
    if (m.rank == 0 || m.rank > 4) lx.fail(t, "rank must be 1..4");
    Token ot = lx.peek();
    auto order = monoid_order_from_tag(lx.word("an order tag"));
    if (!order || *order == MonoidOrder::kRationalUsual)
      lx.fail(ot, "unknown order '" + ot.text + "' (expected lex, revlex or product)");
    m.order = *order;
    Token bt = lx.peek();
    if (lx.word("'box'") != "box") lx.fail(bt, "expected 'box'");
    for (unsigned i = 0; i < m.rank; ++i) m.box.push_back(lx.integer("a box bound"));
  } else if (t.text == "rationals") {
    m.rational = true;
    m.order = MonoidOrder::kRationalUsual;
    Token st = lx.peek();
    if (lx.word("'support'") != "support") lx.fail(st, "expected 'support'");
    while (lx.peek().kind == Token::Kind::kWord) m.support.push_back(parse_rational(lx));
    if (m.support.empty()) lx.fail(st, "empty support");
  } else {
    lx.fail(t, "unknown monoid family '" + t.text + "' (expected naturals or rationals)");
  }
  return m;
}

template <class F>
auto parse_value(const std::string& text, std::size_t line, std::size_t column, F f) {
  Lexer lx(text, line, column);
  auto v = f(lx);
  if (!lx.done()) lx.fail(lx.peek(), "unexpected '" + lx.peek().text + "'");
  return v;
}

std::string join_ids(const std::vector<Elem>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + std::to_string(ids[i]);
  return s;
}

std::string morphism_atom(const MorphismExpr& m) {
  std::string s = serialize(m);
  return s.find(' ') == std::string::npos ? s : "(" + s + ")";
}

}  // namespace

RingSpec parse_spec(const std::string& text) {
  RingSpec spec;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool keyed = false, bare = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::size_t colon = line.find(':');
    std::string key;
    if (colon != std::string::npos) {
      key = line.substr(first, colon - first);
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    }
    bool is_key = colon != std::string::npos && (key == "ring" || key == "alpha" || key == "delta" || key == "monoid");
    if (!is_key) {
      if (colon != std::string::npos) throw SpecError(line_no, first + 1, "unknown key '" + key + "'");
      if (keyed || bare) throw SpecError(line_no, first + 1, "a bare ring expression must be the only line");
      bare = true;
      spec.ring = parse_value(line, line_no, 1, parse_ring);
      continue;
    }
    if (bare) throw SpecError(line_no, first + 1, "keyed lines cannot follow a bare ring expression");
    keyed = true;
    std::string value = line.substr(colon + 1);
    std::size_t col = colon + 2;
    auto dup = [&](bool present) {
      if (present) throw SpecError(line_no, first + 1, "duplicate key '" + key + "'");
    };
    if (key == "ring") {
      dup(spec.ring != nullptr);
      spec.ring = parse_value(value, line_no, col, parse_ring);
    } else if (key == "alpha") {
      dup(spec.alpha != nullptr);
      spec.alpha = parse_value(value, line_no, col, parse_morphism);
    } else if (key == "delta") {
      dup(spec.delta.has_value());
      spec.delta = parse_value(value, line_no, col, parse_delta);
    } else {
      dup(spec.monoid.has_value());
      spec.monoid = parse_value(value, line_no, col, parse_monoid);
    }
  }
  if (!spec.ring) throw SpecError(line_no == 0 ? 1 : line_no, 1, "missing ring expression");
  return spec;
}

std::string serialize(const MorphismExpr& m) {
  switch (m.kind) {
    case MorphismExpr::Kind::kIdentity: return "identity";
    case MorphismExpr::Kind::kFrobenius: return "frobenius";
    case MorphismExpr::Kind::kSwap: return "swap";
    case MorphismExpr::Kind::kTable: return "table [" + join_ids(m.table) + "]";
    case MorphismExpr::Kind::kExtend: return "extend " + morphism_atom(*m.inner);
    case MorphismExpr::Kind::kInverse: return "inverse " + morphism_atom(*m.inner);
  }
  return "?";
}

std::string serialize(const RingExpr& e) {
  auto atom = [](const RingExpr& c) { return "(" + serialize(c) + ")"; };
  switch (e.kind) {
    case RingExpr::Kind::kZmod: return "zmod " + std::to_string(e.ints[0]);
    case RingExpr::Kind::kField: return "field " + std::to_string(e.ints[0]) + " " + std::to_string(e.ints[1]);
    case RingExpr::Kind::kProduct: return "product " + atom(*e.children[0]) + " " + atom(*e.children[1]);
    case RingExpr::Kind::kMatrix: return "matrix " + std::to_string(e.ints[0]) + " " + atom(*e.children[0]);
    case RingExpr::Kind::kUpperTriangular:
      return "upper_triangular " + std::to_string(e.ints[0]) + " " + atom(*e.children[0]);
    case RingExpr::Kind::kSkewTriangular:
      return "skew_triangular " + family_tag(e.family) + " " + std::to_string(e.ints[0]) + " " +
             atom(*e.children[0]) + " " + morphism_atom(*e.sigma);
    case RingExpr::Kind::kQuotient: return "quotient " + atom(*e.children[0]) + " [" + join_ids(e.ideal_generators) + "]";
  }
  return "?";
}

std::string serialize(const DeltaExpr& d) {
  switch (d.kind) {
    case DeltaExpr::Kind::kZero: return "zero";
    case DeltaExpr::Kind::kInner: return "inner " + std::to_string(d.element);
    case DeltaExpr::Kind::kTable: return "table [" + join_ids(d.table) + "]";
  }
  return "?";
}

std::string serialize(const MonoidExpr& m) {
  std::string s;
  if (m.rational) {
    s = "rationals support";
    for (auto [a, b] : m.support) s += " " + (b == 1 ? std::to_string(a) : std::to_string(a) + "/" + std::to_string(b));
    return s;
  }
  s = "naturals " + std::to_string(m.rank) + " " + to_string(m.order) + " box";
  for (unsigned b : m.box) s += " " + std::to_string(b);
  return s;
}

std::string serialize(const RingSpec& spec) {
  std::string ring = serialize(*spec.ring);
  if (!spec.alpha && !spec.delta && !spec.monoid) return ring;
  std::string s = "ring: " + ring + "\n";
  if (spec.alpha) s += "alpha: " + serialize(*spec.alpha) + "\n";
  if (spec.delta) s += "delta: " + serialize(*spec.delta) + "\n";
  if (spec.monoid) s += "monoid: " + serialize(*spec.monoid) + "\n";
  return s;
}

namespace {

struct BuiltRing {
  RingPtr ring;
  std::optional<SkewTriangular> triangular;
  std::vector<BuiltRing> children;
};

RingMorphism build_morphism(const MorphismExpr& m, const RingExpr& where, const BuiltRing& built);

template <class F>
auto located(std::size_t line, std::size_t column, F f) {
  try {
    return f();
  } catch (const PreconditionError& e) {
    throw SpecError(line, column, e.what());
  } catch (const StructuralError& e) {
    throw SpecError(line, column, e.what());
  } catch (const ContractViolation& e) {
    throw SpecError(line, column, e.what());
  }
}

BuiltRing build_ring(const RingExpr& e, std::size_t cap) {
  BuiltRing out;
  for (const auto& c : e.children) out.children.push_back(build_ring(*c, cap));
  auto child = [&](std::size_t i) -> const FiniteRing& { return *out.children[i].ring; };
  out.ring = located(e.line, e.column, [&]() -> RingPtr {
    switch (e.kind) {
      case RingExpr::Kind::kZmod:
        if (e.ints[0] < 2) throw PreconditionError("zmod needs n >= 2");
        return make_zmod(e.ints[0], cap);
      case RingExpr::Kind::kField: return make_field(e.ints[0], e.ints[1], cap);
      case RingExpr::Kind::kProduct: return make_product(child(0), child(1), cap);
      case RingExpr::Kind::kMatrix:
        if (e.ints[0] < 1) throw PreconditionError("matrix size must be positive");
        return make_matrix(child(0), e.ints[0], cap);
      case RingExpr::Kind::kUpperTriangular:
        if (e.ints[0] < 1) throw PreconditionError("matrix size must be positive");
        return make_upper_triangular(child(0), e.ints[0], cap);
      case RingExpr::Kind::kSkewTriangular: {
        RingMorphism sigma = build_morphism(*e.sigma, *e.children[0], out.children[0]);
        if (e.ints[0] < 1) throw PreconditionError("matrix size must be positive");
        out.triangular.emplace(SkewTriangular::build({sigma, e.ints[0], e.family}, cap));
        return out.triangular->ring();
      }
      case RingExpr::Kind::kQuotient: {
        const FiniteRing& r = child(0);
        for (Elem g : e.ideal_generators)
          if (g >= r.order()) throw StructuralError("ideal generator " + std::to_string(g) + " out of range");
        ElementSet ideal = two_sided_ideal(r, ElementSet(r, e.ideal_generators));
        return make_quotient(r, ideal, cap);
      }
    }
    throw StructuralError("unknown constructor");
  });
  return out;
}

RingMorphism build_morphism(const MorphismExpr& m, const RingExpr& where, const BuiltRing& built) {
  return located(m.line, m.column, [&]() -> RingMorphism {
    RingMorphism out = [&]() -> RingMorphism {
      switch (m.kind) {
        case MorphismExpr::Kind::kIdentity: return identity_morphism(built.ring);
        case MorphismExpr::Kind::kFrobenius: return frobenius(built.ring);
        case MorphismExpr::Kind::kSwap:
          if (where.kind != RingExpr::Kind::kProduct || !(*where.children[0] == *where.children[1]))
            throw PreconditionError("swap needs a product of two equal factors");
          return product_swap(built.ring, *built.children[0].ring);
        case MorphismExpr::Kind::kTable: return endomorphism_or_throw(built.ring, m.table);
        case MorphismExpr::Kind::kExtend: {
          if (!built.triangular) throw PreconditionError("extend needs a skew_triangular ring");
          RingMorphism inner = build_morphism(*m.inner, *where.children[0], built.children[0]);
          return extend_to_triangular(inner, *built.triangular);
        }
        case MorphismExpr::Kind::kInverse: return build_morphism(*m.inner, where, built).inverse();
      }
      throw StructuralError("unknown morphism");
    }();
    return out.renamed(serialize(m));
  });
}

}  // namespace

RingMorphism BuiltSpec::alpha_or_identity() const { return alpha ? *alpha : identity_morphism(ring); }

AlphaDerivation BuiltSpec::delta_or_zero() const { return delta ? *delta : zero_derivation(alpha_or_identity()); }

BuiltSpec build_spec(const RingSpec& spec, std::size_t order_cap) {
  BuiltSpec out;
  out.spec = spec;
  BuiltRing built = build_ring(*spec.ring, order_cap);
  out.ring = built.ring;
  out.triangular = built.triangular;
  if (spec.alpha) out.alpha = build_morphism(*spec.alpha, *spec.ring, built);
  if (spec.delta) {
    const DeltaExpr& d = *spec.delta;
    RingMorphism alpha = out.alpha_or_identity();
    out.delta = located(d.line, d.column, [&]() -> AlphaDerivation {
      switch (d.kind) {
        case DeltaExpr::Kind::kZero: return zero_derivation(alpha);
        case DeltaExpr::Kind::kInner:
          if (d.element >= out.ring->order()) throw StructuralError("inner element out of range");
          return inner_derivation(alpha, d.element);
        case DeltaExpr::Kind::kTable: return derivation_or_throw(alpha, d.table, serialize(d));
      }
      throw StructuralError("unknown derivation");
    });
  }
  if (spec.monoid) {
    const MonoidExpr& m = *spec.monoid;
    OrderedMonoid monoid = m.rational ? OrderedMonoid::rationals() : OrderedMonoid::naturals(m.rank, m.order);
    MonoidContext ctx{out.ring, monoid, {}};
    if (m.rational) {
      ctx.support.push_back(monoid.identity());
      for (auto [a, b] : m.support) {
        MonoidElem g = monoid.element({a, b});
        if (!ctx.in_support(g)) {
          ctx.support.push_back(g);
          std::sort(ctx.support.begin(), ctx.support.end(),
                    [&](const MonoidElem& x, const MonoidElem& y) { return monoid.less(x, y); });
        }
      }
    } else {
      ctx.support = monoid.box(m.box);
    }
    out.monoid = std::move(ctx);
  }
  return out;
}

}  // namespace cpb
