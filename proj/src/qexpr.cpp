#include <diagonals/qexpr.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace diag {

TruncSeries CoeffSeries::expand(long order) const
{
  TruncSeries acc(BigRat(0), order);
  for (const auto& term : terms) {
    TruncSeries prod(term.scalar, order);
    long shift = 0;
    bool dead = false;
    for (const auto& [p, e] : term.tpowers) {
      long v = (long)p.valuation();
      UniPoly body = p;
      if (v > 0) {
        BigRat sv = BigRat(v) * e;
        assert(is_integer(sv) && sgn(sv) >= 0);
        shift += to_long(sv);
        if (shift > order) { dead = true; break; }
        std::vector<BigRat> c(p.coeffs().begin() + v, p.coeffs().end());
        body = UniPoly(std::move(c));
      }
      if (body.degree() == 0 && body[0] == 1) continue;
      TruncSeries base = from_poly(body * (BigRat(1) / body[0]), order);
      prod = prod * series_pow_rational(base, e);
      // body(0) != 1 only arises for exact rational roots taken upstream
      assert(body[0] == 1);
    }
    if (dead) continue;
    if (shift > 0) prod = series_shift_mul(prod, shift);
    acc = acc + prod;
  }
  return acc;
}

CoeffSeries CoeffSeries::scaled(const BigRat& s) const
{
  CoeffSeries out;
  if (is_zero(s)) return out;
  for (const auto& t : terms) {
    Term nt = t;
    nt.scalar *= s;
    out.terms.push_back(std::move(nt));
  }
  return out;
}

namespace {

// ---------------------------------------------------------------- lexer --

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_ws()
  {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }
  bool eof()
  {
    skip_ws();
    return pos >= text.size();
  }
  char peek()
  {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c)
  {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c)
  {
    if (!accept(c)) throw SyntaxError(pos, std::string("'") + c + "'");
  }
  bool accept_word(const std::string& w)
  {
    skip_ws();
    if (text.compare(pos, w.size(), w) == 0) {
      std::size_t after = pos + w.size();
      if (after >= text.size() || !std::isalnum((unsigned char)text[after])) {
        pos = after;
        return true;
      }
    }
    return false;
  }
  std::optional<std::string> ident()
  {
    skip_ws();
    if (pos >= text.size()) return std::nullopt;
    if (!std::isalpha((unsigned char)text[pos]) && text[pos] != '_') return std::nullopt;
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }
  std::optional<BigInt> integer()
  {
    skip_ws();
    if (pos >= text.size() || !std::isdigit((unsigned char)text[pos])) return std::nullopt;
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
    return BigInt(text.substr(start, pos - start));
  }
};

// ------------------------------------------------------------------ AST --

struct Node {
  enum Kind { Add, Sub, Mul, Div, Pow, Neg, Num, Var } kind;
  std::vector<Node> kids;
  BigRat value;     // Num
  std::string name; // Var
  BigRat expo;      // Pow exponent
};

struct Parser {
  Lexer lex;
  const std::map<std::string, BigRat>* bindings;
  std::vector<std::string> declared_params;

  Parser(const std::string& text, const std::map<std::string, BigRat>* b)
      : lex(text), bindings(b)
  {
  }

  BigRat parse_exponent()
  {
    // INTEGER | '(' ['-'] INT ['/' INT] ')' | '-' INT
    bool neg = false;
    if (lex.accept('(')) {
      if (lex.accept('-')) neg = true;
      auto n = lex.integer();
      if (!n) throw SyntaxError(lex.pos, "integer exponent");
      BigRat e(*n);
      if (lex.accept('/')) {
        auto d = lex.integer();
        if (!d) throw SyntaxError(lex.pos, "integer denominator");
        e /= BigRat(*d);
      }
      lex.expect(')');
      return neg ? -e : e;
    }
    if (lex.accept('-')) neg = true;
    auto n = lex.integer();
    if (!n) throw SyntaxError(lex.pos, "integer exponent");
    BigRat e(*n);
    return neg ? -e : e;
  }

  Node parse_primary()
  {
    if (lex.accept('(')) {
      Node e = parse_expr();
      lex.expect(')');
      return e;
    }
    if (auto n = lex.integer()) {
      Node node;
      node.kind = Node::Num;
      node.value = BigRat(*n);
      return node;
    }
    if (auto id = lex.ident()) {
      Node node;
      node.kind = Node::Var;
      node.name = *id;
      return node;
    }
    throw SyntaxError(lex.pos, "number, identifier or '('");
  }

  Node parse_power()
  {
    Node base = parse_primary();
    if (lex.accept('^')) {
      Node p;
      p.kind = Node::Pow;
      p.expo = parse_exponent();
      p.kids.push_back(std::move(base));
      return p;
    }
    return base;
  }

  Node parse_unary()
  {
    if (lex.accept('-')) {
      Node n;
      n.kind = Node::Neg;
      n.kids.push_back(parse_unary());
      return n;
    }
    lex.accept('+');
    return parse_power();
  }

  Node parse_term()
  {
    Node left = parse_unary();
    for (;;) {
      if (lex.accept('*')) {
        Node n;
        n.kind = Node::Mul;
        n.kids.push_back(std::move(left));
        n.kids.push_back(parse_unary());
        left = std::move(n);
      } else if (lex.accept('/')) {
        Node n;
        n.kind = Node::Div;
        n.kids.push_back(std::move(left));
        n.kids.push_back(parse_unary());
        left = std::move(n);
      } else
        break;
    }
    return left;
  }

  Node parse_expr()
  {
    Node left = parse_term();
    for (;;) {
      if (lex.accept('+')) {
        Node n;
        n.kind = Node::Add;
        n.kids.push_back(std::move(left));
        n.kids.push_back(parse_term());
        left = std::move(n);
      } else if (lex.peek() == '-') {
        lex.accept('-');
        Node n;
        n.kind = Node::Sub;
        n.kids.push_back(std::move(left));
        n.kids.push_back(parse_term());
        left = std::move(n);
      } else
        break;
    }
    return left;
  }
};

// -------------------------------------------------------- semantic value --

// one generalized monomial during evaluation; exponents may be negative
// (Laurent) until normalization
struct MonoVal {
  BigRat scalar{1};
  std::map<std::string, BigRat> var_exp;
  long t_exp = 0; // power of the global product t
  std::vector<std::pair<UniPoly, BigRat>> tpowers;
};

using PolyVal = std::vector<MonoVal>;

bool same_structure(const MonoVal& a, const MonoVal& b)
{
  return a.var_exp == b.var_exp && a.t_exp == b.t_exp && a.tpowers == b.tpowers;
}

void merge_into(PolyVal& acc, MonoVal m)
{
  if (is_zero(m.scalar)) return;
  for (auto& x : acc) {
    if (same_structure(x, m)) {
      x.scalar += m.scalar;
      if (is_zero(x.scalar)) {
        x = acc.back();
        acc.pop_back();
      }
      return;
    }
  }
  acc.push_back(std::move(m));
}

PolyVal add(const PolyVal& a, const PolyVal& b)
{
  PolyVal r = a;
  for (const auto& m : b) merge_into(r, m);
  return r;
}

MonoVal mul_mono(const MonoVal& a, const MonoVal& b)
{
  MonoVal r = a;
  r.scalar *= b.scalar;
  for (const auto& [v, e] : b.var_exp) {
    r.var_exp[v] += e;
    if (is_zero(r.var_exp[v])) r.var_exp.erase(v);
  }
  r.t_exp += b.t_exp;
  for (const auto& [p, e] : b.tpowers) {
    bool merged = false;
    for (auto& [q, f] : r.tpowers)
      if (q == p) {
        f += e;
        merged = true;
        break;
      }
    if (merged) {
      std::vector<std::pair<UniPoly, BigRat>> keep;
      for (auto& [q, f] : r.tpowers)
        if (!is_zero(f)) keep.emplace_back(q, f);
      r.tpowers = std::move(keep);
    } else
      r.tpowers.emplace_back(p, e);
  }
  return r;
}

PolyVal mul(const PolyVal& a, const PolyVal& b)
{
  PolyVal r;
  for (const auto& x : a)
    for (const auto& y : b) merge_into(r, mul_mono(x, y));
  return r;
}

// try to view a value as a polynomial in t alone
std::optional<UniPoly> as_t_poly(const PolyVal& v)
{
  long maxe = 0;
  for (const auto& m : v) {
    if (!m.var_exp.empty() || !m.tpowers.empty()) return std::nullopt;
    if (m.t_exp < 0) return std::nullopt;
    maxe = std::max(maxe, m.t_exp);
  }
  std::vector<BigRat> c(maxe + 1, BigRat(0));
  for (const auto& m : v) c[m.t_exp] += m.scalar;
  return UniPoly(std::move(c));
}

// rational e-th power of a rational: exact or nullopt
std::optional<BigRat> rat_rational_pow(const BigRat& x, const BigRat& e)
{
  if (is_integer(e)) {
    long ei = to_long(e);
    return rat_pow(x, ei);
  }
  if (sgn(x) <= 0) return std::nullopt;
  unsigned long q = BigInt(e.get_den()).get_ui();
  BigInt rn, rd;
  if (!mpz_root(rn.get_mpz_t(), x.get_num_mpz_t(), q)) return std::nullopt;
  if (!mpz_root(rd.get_mpz_t(), x.get_den_mpz_t(), q)) return std::nullopt;
  BigRat root(rn, rd);
  root.canonicalize();
  BigInt pnum = e.get_num();
  return rat_pow(root, to_long(pnum));
}

PolyVal pow_val(const PolyVal& v, const BigRat& e, std::size_t err_pos)
{
  if (is_integer(e)) {
    long ei = to_long(e);
    if (ei >= 0) {
      PolyVal r{MonoVal{}};
      for (long k = 0; k < ei; ++k) r = mul(r, v);
      return r;
    }
    // negative integer: single monomial or t-polynomial only
  }
  if (v.size() == 1) {
    MonoVal m = v[0];
    auto s = rat_rational_pow(m.scalar, e);
    if (!s) throw SyntaxError(err_pos, "exact rational power of coefficient");
    MonoVal r;
    r.scalar = *s;
    for (const auto& [var, ex] : m.var_exp) r.var_exp[var] = ex * e;
    if (m.t_exp != 0) {
      BigRat te = BigRat(m.t_exp) * e;
      if (!is_integer(te)) throw SyntaxError(err_pos, "integral power of t");
      r.t_exp = to_long(te);
    }
    for (const auto& [p, ex] : m.tpowers) r.tpowers.emplace_back(p, ex * e);
    return PolyVal{r};
  }
  if (auto p = as_t_poly(v)) {
    // polynomial in t raised to a rational power: keep as a power atom
    // after normalizing p(0) to 1 (pulling out any t-valuation first)
    BigRat c0 = (*p)[0];
    if (is_zero(c0)) {
      std::size_t val = p->valuation();
      std::vector<BigRat> c(p->coeffs().begin() + val, p->coeffs().end());
      UniPoly body(std::move(c));
      BigRat te = BigRat((long)val) * e;
      if (!is_integer(te)) throw SyntaxError(err_pos, "integral power of t");
      PolyVal bodyval;
      for (long i = 0; i <= body.degree(); ++i) {
        if (is_zero(body[i])) continue;
        MonoVal m;
        m.scalar = body[i];
        m.t_exp = i;
        bodyval.push_back(m);
      }
      PolyVal res = pow_val(bodyval, e, err_pos);
      for (auto& m : res) m.t_exp += to_long(te);
      return res;
    }
    auto s = rat_rational_pow(c0, e);
    if (!s) throw SyntaxError(err_pos, "exact rational power of constant term");
    UniPoly norm = *p * (BigRat(1) / c0);
    MonoVal r;
    r.scalar = *s;
    if (norm.degree() >= 1) r.tpowers.emplace_back(norm, e);
    return PolyVal{r};
  }
  throw SyntaxError(err_pos, "power applicable to a monomial or t-polynomial");
}

struct Evaluator {
  const std::map<std::string, BigRat>* bindings;
  std::vector<std::string> param_names; // declared parameters

  bool is_param(const std::string& n) const
  {
    return std::find(param_names.begin(), param_names.end(), n) != param_names.end();
  }

  PolyVal eval(const Node& n)
  {
    switch (n.kind) {
      case Node::Num: {
        MonoVal m;
        m.scalar = n.value;
        return is_zero(n.value) ? PolyVal{} : PolyVal{m};
      }
      case Node::Var: {
        if (is_param(n.name)) {
          if (bindings) {
            auto it = bindings->find(n.name);
            if (it != bindings->end()) {
              MonoVal m;
              m.scalar = it->second;
              return is_zero(it->second) ? PolyVal{} : PolyVal{m};
            }
          }
          throw UnboundParameter(n.name);
        }
        MonoVal m;
        if (n.name == "t")
          m.t_exp = 1;
        else
          m.var_exp[n.name] = 1;
        return PolyVal{m};
      }
      case Node::Add:
        return add(eval(n.kids[0]), eval(n.kids[1]));
      case Node::Sub: {
        PolyVal b = eval(n.kids[1]);
        for (auto& m : b) m.scalar = -m.scalar;
        return add(eval(n.kids[0]), b);
      }
      case Node::Neg: {
        PolyVal a = eval(n.kids[0]);
        for (auto& m : a) m.scalar = -m.scalar;
        return a;
      }
      case Node::Mul:
        return mul(eval(n.kids[0]), eval(n.kids[1]));
      case Node::Div: {
        PolyVal a = eval(n.kids[0]);
        PolyVal b = eval(n.kids[1]);
        return mul(a, pow_val(b, BigRat(-1), 0));
      }
      case Node::Pow:
        return pow_val(eval(n.kids[0]), n.expo, 0);
    }
    return {};
  }
};

// collect the top-level multiplicative chain: (subexpression, exponent)
void collect_units(const Node& n, const BigRat& mult,
                   std::vector<std::pair<const Node*, BigRat>>& out)
{
  switch (n.kind) {
    case Node::Mul:
      collect_units(n.kids[0], mult, out);
      collect_units(n.kids[1], mult, out);
      return;
    case Node::Div:
      collect_units(n.kids[0], mult, out);
      collect_units(n.kids[1], -mult, out);
      return;
    case Node::Pow:
      collect_units(n.kids[0], mult * n.expo, out);
      return;
    default:
      out.emplace_back(&n, mult);
  }
}

struct CollectedVars {
  std::vector<std::string> names;
  void see(const std::string& n)
  {
    if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  }
};

void collect_vars(const PolyVal& v, CollectedVars& cv)
{
  for (const auto& m : v)
    for (const auto& [name, e] : m.var_exp) cv.see(name);
}

GenPoly to_gen_poly(const PolyVal& v, const std::vector<std::string>& vars,
                    bool require_unit_constant)
{
  // group by exponent vector and structure; pull the rational constant out
  GenPoly g;
  g.constant = 0;
  std::vector<GenMonomial> monos;
  for (const auto& m : v) {
    std::vector<BigRat> expo(vars.size(), BigRat(0));
    for (const auto& [name, e] : m.var_exp) {
      auto it = std::find(vars.begin(), vars.end(), name);
      assert(it != vars.end());
      expo[it - vars.begin()] = e;
    }
    for (const auto& e : expo)
      if (sgn(e) < 0) throw NegativeExponentAfterNormalize();
    if (m.t_exp < 0) throw NegativeExponentAfterNormalize();
    bool zero_exp = true;
    for (const auto& e : expo)
      if (!is_zero(e)) zero_exp = false;
    if (zero_exp && m.t_exp == 0 && m.tpowers.empty()) {
      g.constant += m.scalar;
      continue;
    }
    CoeffSeries::Term term;
    term.scalar = m.scalar;
    term.tpowers = m.tpowers;
    if (m.t_exp != 0)
      term.tpowers.emplace_back(UniPoly::monomial(BigRat(1), 1), BigRat(m.t_exp));
    if (zero_exp && !m.tpowers.empty() && m.t_exp == 0) {
      // zero-exponent coefficient with t-structure: split off its value at 0
      BigRat at0 = term.scalar; // each tpower base has p(0) = 1
      g.constant += at0;
      // remainder (series - constant) enters as a zero-exponent monomial
      GenMonomial gm;
      gm.exponents = expo;
      gm.coeff.terms.push_back(term);
      CoeffSeries::Term minus;
      minus.scalar = -at0;
      gm.coeff.terms.push_back(minus);
      monos.push_back(std::move(gm));
      continue;
    }
    GenMonomial gm;
    gm.exponents = std::move(expo);
    gm.coeff.terms.push_back(std::move(term));
    monos.push_back(std::move(gm));
  }
  // merge monomials with equal exponent vectors
  std::vector<GenMonomial> merged;
  for (auto& m : monos) {
    bool done = false;
    for (auto& x : merged)
      if (x.exponents == m.exponents) {
        for (auto& t : m.coeff.terms) x.coeff.terms.push_back(std::move(t));
        done = true;
        break;
      }
    if (!done) merged.push_back(std::move(m));
  }
  // collapse constant terms inside each coefficient
  for (auto& m : merged) {
    BigRat c(0);
    std::vector<CoeffSeries::Term> keep;
    for (auto& t : m.coeff.terms) {
      if (t.tpowers.empty())
        c += t.scalar;
      else
        keep.push_back(std::move(t));
    }
    if (!is_zero(c)) keep.push_back(CoeffSeries::Term{c, {}});
    m.coeff.terms = std::move(keep);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const GenMonomial& m) { return m.coeff.is_zero_coeff(); }),
               merged.end());
  // deterministic order: by exponent vector lexicographically
  std::sort(merged.begin(), merged.end(), [](const GenMonomial& a, const GenMonomial& b) {
    return a.exponents < b.exponents;
  });
  g.monomials = std::move(merged);
  if (require_unit_constant && g.constant != 1) throw NonUnitConstantTerm();
  return g;
}

QExpr parse_impl(const std::string& text, const std::map<std::string, BigRat>* bindings)
{
  Parser P(text, bindings);

  // optional parameter declaration: param a b :
  if (P.lex.accept_word("param")) {
    for (;;) {
      auto id = P.lex.ident();
      if (!id) break;
      P.declared_params.push_back(*id);
    }
    P.lex.expect(':');
  }

  // optional diag[...] of
  std::vector<std::string> diag_names;
  bool have_diag = false;
  if (P.lex.accept_word("diag")) {
    have_diag = true;
    P.lex.expect('[');
    for (;;) {
      auto id = P.lex.ident();
      if (!id) throw SyntaxError(P.lex.pos, "variable name");
      diag_names.push_back(*id);
      if (!P.lex.accept(',')) break;
    }
    P.lex.expect(']');
    if (!P.lex.accept_word("of")) throw SyntaxError(P.lex.pos, "'of'");
  }

  Node root = P.parse_expr();
  if (!P.lex.eof()) throw SyntaxError(P.lex.pos, "end of input");

  Evaluator E;
  E.bindings = bindings;
  E.param_names = P.declared_params;

  std::vector<std::pair<const Node*, BigRat>> units;
  collect_units(root, BigRat(1), units);

  // evaluate every unit, split into numerator monomial part / polynomial
  // factors with their powers
  PolyVal numerator{MonoVal{}};
  std::vector<std::pair<PolyVal, BigRat>> factors;
  for (const auto& [node, alpha] : units) {
    PolyVal v = E.eval(*node);
    bool single = v.size() <= 1;
    bool positive_int = is_integer(alpha) && sgn(alpha) > 0;
    if (single || positive_int || as_t_poly(v).has_value())
      numerator = mul(numerator, pow_val(v, alpha, 0));
    else
      factors.emplace_back(v, alpha);
  }

  // variable order: diag-clause names first (clause order), then the
  // remaining variables sorted by name; without a clause, occurrence order.
  // This makes parse(print(q)) reproduce q exactly.
  CollectedVars cv;
  collect_vars(numerator, cv);
  for (const auto& [v, a] : factors) collect_vars(v, cv);
  QExpr q;
  if (have_diag) {
    for (const auto& n : diag_names) {
      if (std::find(cv.names.begin(), cv.names.end(), n) == cv.names.end())
        throw SyntaxError(0, "diag variable '" + n + "' present in expression");
      q.variables.push_back(n);
    }
    std::vector<std::string> rest;
    for (const auto& n : cv.names)
      if (std::find(q.variables.begin(), q.variables.end(), n) == q.variables.end())
        rest.push_back(n);
    std::sort(rest.begin(), rest.end());
    for (auto& n : rest) q.variables.push_back(std::move(n));
  } else {
    q.variables = cv.names;
  }
  q.numerator = to_gen_poly(numerator, q.variables, false);
  for (const auto& [v, a] : factors) {
    if (is_zero(a)) continue;
    q.factors.emplace_back(to_gen_poly(v, q.variables, true), a);
  }
  if (have_diag) {
    for (std::size_t i = 0; i < diag_names.size(); ++i) q.diag_vars.push_back(i);
  } else {
    for (std::size_t i = 0; i < q.variables.size(); ++i) q.diag_vars.push_back(i);
  }
  return q;
}

std::string coeff_to_string(const CoeffSeries& c)
{
  std::ostringstream os;
  bool first = true;
  for (const auto& t : c.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(t.scalar) << ")";
    for (const auto& [p, e] : t.tpowers)
      os << "*(" << p.to_string("t") << ")^(" << to_string(e) << ")";
  }
  if (first) os << "0";
  return os.str();
}

std::string poly_to_string(const GenPoly& g, const std::vector<std::string>& vars)
{
  std::ostringstream os;
  os << to_string(g.constant);
  for (const auto& m : g.monomials) {
    os << " + (" << coeff_to_string(m.coeff) << ")";
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (is_zero(m.exponents[i])) continue;
      os << "*" << vars[i];
      if (m.exponents[i] != 1) os << "^(" << to_string(m.exponents[i]) << ")";
    }
  }
  return os.str();
}

} // namespace

QExpr parse(const std::string& text)
{
  return parse_impl(text, nullptr);
}

QExpr substitute_param(const std::string& templ, const std::map<std::string, BigRat>& bindings)
{
  return parse_impl(templ, &bindings);
}

std::string print(const QExpr& q)
{
  std::ostringstream os;
  os << "diag[";
  for (std::size_t i = 0; i < q.diag_vars.size(); ++i) {
    if (i) os << ",";
    os << q.variables[q.diag_vars[i]];
  }
  os << "] of (" << poly_to_string(q.numerator, q.variables) << ")";
  for (const auto& [g, a] : q.factors)
    os << " * (" << poly_to_string(g, q.variables) << ")^(" << to_string(a) << ")";
  return os.str();
}

namespace {
bool coeff_eq(const CoeffSeries& a, const CoeffSeries& b)
{
  // compare by expansion to a safe order plus structural constants
  if (a.constant_part() != b.constant_part()) return false;
  long n = 12;
  return a.expand(n) == b.expand(n);
}
bool poly_eq(const GenPoly& a, const GenPoly& b)
{
  if (a.constant != b.constant || a.monomials.size() != b.monomials.size()) return false;
  for (std::size_t i = 0; i < a.monomials.size(); ++i) {
    if (a.monomials[i].exponents != b.monomials[i].exponents) return false;
    if (!coeff_eq(a.monomials[i].coeff, b.monomials[i].coeff)) return false;
  }
  return true;
}
} // namespace

bool operator==(const QExpr& a, const QExpr& b)
{
  if (a.variables != b.variables || a.diag_vars != b.diag_vars) return false;
  if (a.factors.size() != b.factors.size()) return false;
  if (!poly_eq(a.numerator, b.numerator)) return false;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    if (a.factors[i].second != b.factors[i].second) return false;
    if (!poly_eq(a.factors[i].first, b.factors[i].first)) return false;
  }
  return true;
}

} // namespace diag
