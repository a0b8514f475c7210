#include <diagonals/ratfun_guess.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace diag {

std::string LinForm::to_string() const
{
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : c) {
    if (!v) continue;
    if (!first) os << (v > 0 ? "+" : "");
    if (v == -1)
      os << "-";
    else if (v != 1)
      os << v << "*";
    os << k;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

bool FactorialTerm::balanced() const
{
  LinForm total;
  for (const auto& [f, m] : numerator)
    for (int i = 0; i < m; ++i) total = total + f;
  for (const auto& [f, m] : denominator)
    for (int i = 0; i < m; ++i) total = total - f;
  for (const auto& [base, f, numer] : pochhammers)
    total = numer ? total + f : total - f;
  return total.is_zero();
}

// ----------------------------------------------------------- term parser --

namespace {

struct TermLexer {
  const std::string& s;
  std::size_t pos = 0;
  explicit TermLexer(const std::string& t) : s(t) {}
  void ws()
  {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }
  bool accept(char ch)
  {
    ws();
    if (pos < s.size() && s[pos] == ch) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char ch)
  {
    if (!accept(ch)) throw std::runtime_error(std::string("factorial term: expected '") + ch + "'");
  }
  bool accept_word(const std::string& w)
  {
    ws();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  std::optional<long> integer()
  {
    ws();
    bool neg = false;
    std::size_t p = pos;
    if (p < s.size() && s[p] == '-') {
      neg = true;
      ++p;
    }
    if (p >= s.size() || !std::isdigit((unsigned char)s[p])) return std::nullopt;
    long v = 0;
    while (p < s.size() && std::isdigit((unsigned char)s[p])) v = v * 10 + (s[p++] - '0');
    pos = p;
    return neg ? -v : v;
  }
  std::optional<std::string> ident()
  {
    ws();
    if (pos >= s.size() || !std::isalpha((unsigned char)s[pos])) return std::nullopt;
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum((unsigned char)s[pos]) || s[pos] == '_')) ++pos;
    return s.substr(start, pos - start);
  }
};

// linear form: [-] [INT*]IDENT (('+'|'-') [INT*]IDENT | INT)*
LinForm parse_linform(TermLexer& lx)
{
  LinForm f;
  bool first = true;
  for (;;) {
    lx.ws();
    long sign = 1;
    if (lx.accept('+'))
      sign = 1;
    else if (lx.accept('-'))
      sign = -1;
    else if (!first)
      break;
    long coef = 1;
    if (auto n = lx.integer()) {
      coef = *n;
      lx.accept('*');
    }
    if (auto id = lx.ident())
      f.c[*id] += sign * coef;
    else if (coef == 0)
      ; // bare zero
    else if (first)
      throw std::runtime_error("factorial term: linear form expected");
    else
      break;
    first = false;
    lx.ws();
    if (lx.pos >= lx.s.size()) break;
    char ch = lx.s[lx.pos];
    if (ch != '+' && ch != '-') break;
  }
  for (auto it = f.c.begin(); it != f.c.end();)
    it = it->second == 0 ? f.c.erase(it) : std::next(it);
  return f;
}

void add_fact(std::vector<std::pair<LinForm, int>>& v, const LinForm& f, int mult)
{
  if (f.is_zero()) return; // 0! = 1
  for (auto& [g, m] : v)
    if (g == f) {
      m += mult;
      return;
    }
  v.emplace_back(f, mult);
}

} // namespace

FactorialTerm parse_factorial_term(const std::string& text)
{
  // sum[n,k,...] ITEM (('*'|'/') ITEM)*
  // ITEM := '(' linform ')!' ['^' INT] | IDENT '!' ['^' INT]
  //       | 'C(' linform ',' linform ')' ['^' INT]
  //       | 'M(' linform ';' linform (',' linform)* ')' ['^' INT]
  //       | INT '^' '(' linform ')'            (geometric weight)
  //       | 'poch(' INT '/' INT ',' linform ')' (Pochhammer, odd half-integers)
  FactorialTerm t;
  TermLexer lx(text);
  if (!lx.accept_word("sum")) throw std::runtime_error("factorial term must start with sum[...]");
  lx.expect('[');
  for (;;) {
    auto id = lx.ident();
    if (!id) throw std::runtime_error("factorial term: index name expected");
    t.indices.push_back(*id);
    if (!lx.accept(',')) break;
  }
  lx.expect(']');

  bool denominator_mode = false;
  auto numden = [&](const LinForm& f, int mult) {
    add_fact(denominator_mode ? t.denominator : t.numerator, f, mult);
  };
  for (;;) {
    lx.ws();
    if (lx.pos >= lx.s.size()) break;
    if (lx.accept_word("C(")) {
      LinForm top = parse_linform(lx);
      lx.expect(',');
      LinForm bot = parse_linform(lx);
      lx.expect(')');
      long e = 1;
      if (lx.accept('^')) e = *lx.integer();
      for (long i = 0; i < e; ++i) {
        numden(top, 1);
        denominator_mode = !denominator_mode;
        numden(bot, 1);
        numden(top - bot, 1);
        denominator_mode = !denominator_mode;
      }
      if (!denominator_mode)
        for (long i = 0; i < e; ++i)
          t.blocks.emplace_back(top, std::vector<LinForm>{bot, top - bot});
    } else if (lx.accept_word("M(")) {
      LinForm top = parse_linform(lx);
      lx.expect(';');
      std::vector<LinForm> parts;
      for (;;) {
        parts.push_back(parse_linform(lx));
        if (!lx.accept(',')) break;
      }
      lx.expect(')');
      long e = 1;
      if (lx.accept('^')) e = *lx.integer();
      LinForm sum;
      for (const auto& p : parts) sum = sum + p;
      if (!(sum == top)) throw std::runtime_error("multinomial parts must sum to the total");
      for (long i = 0; i < e; ++i) {
        numden(top, 1);
        denominator_mode = !denominator_mode;
        for (const auto& p : parts) numden(p, 1);
        denominator_mode = !denominator_mode;
      }
      if (!denominator_mode)
        for (long i = 0; i < e; ++i) t.blocks.emplace_back(top, parts);
    } else if (lx.accept_word("poch(")) {
      long p = *lx.integer();
      long qd = 1;
      if (lx.accept('/')) qd = *lx.integer();
      lx.expect(',');
      LinForm f = parse_linform(lx);
      lx.expect(')');
      if (p == 1 && qd == 2) {
        // (1/2)_f = (2f)!/(4^f f!): rewritable, participates in derivation
        LinForm f2;
        for (const auto& [k, v] : f.c) f2.c[k] = 2 * v;
        numden(f2, 1);
        denominator_mode = !denominator_mode;
        numden(f, 1);
        denominator_mode = !denominator_mode;
        t.weights.emplace_back(denominator_mode ? BigRat(4) : rat(1, 4), f);
      } else {
        // kept as an evaluated factor only
        t.pochhammers.emplace_back(rat(p, qd), f, !denominator_mode);
      }
    } else if (lx.accept('(')) {
      // either "(linform)!" or a rational weight "(a/b)^(linform)"
      std::size_t save = lx.pos;
      bool is_weight = false;
      if (auto a = lx.integer()) {
        if (lx.accept('/')) {
          if (auto b2 = lx.integer()) {
            if (lx.accept(')') && lx.accept('^')) {
              lx.expect('(');
              LinForm f = parse_linform(lx);
              lx.expect(')');
              BigRat base = rat(*a, *b2);
              if (denominator_mode) base = 1 / base;
              t.weights.emplace_back(base, f);
              is_weight = true;
            }
          }
        }
      }
      if (!is_weight) {
        lx.pos = save;
        LinForm f = parse_linform(lx);
        lx.expect(')');
        lx.expect('!');
        long e = 1;
        if (lx.accept('^')) e = *lx.integer();
        numden(f, (int)e);
      }
    } else if (auto n = lx.integer()) {
      BigRat base(*n);
      if (lx.accept('/')) base /= BigRat(*lx.integer());
      lx.expect('^');
      lx.expect('(');
      LinForm f = parse_linform(lx);
      lx.expect(')');
      t.weights.emplace_back(base, denominator_mode ? [&] {
        LinForm neg;
        for (const auto& [k, v] : f.c) neg.c[k] = -v;
        return neg;
      }() : f);
    } else if (auto id = lx.ident()) {
      LinForm f;
      f.c[*id] = 1;
      lx.expect('!');
      long e = 1;
      if (lx.accept('^')) e = *lx.integer();
      numden(f, (int)e);
    } else
      throw std::runtime_error("factorial term: unexpected input at position " +
                               std::to_string(lx.pos));
    lx.ws();
    if (lx.accept('*')) continue;
    if (lx.accept('/')) {
      if (lx.accept('(')) {
        // parse the parenthesized denominator group with the same item loop
        denominator_mode = true;
        // handled by continuing the loop; the closing ')' ends the group
        continue;
      }
      denominator_mode = true;
      continue;
    }
    if (lx.accept(')')) {
      denominator_mode = false;
      lx.ws();
      if (lx.accept('*')) { continue; }
      if (lx.accept('/')) { denominator_mode = true; lx.accept('('); continue; }
      continue;
    }
    if (lx.pos >= lx.s.size()) break;
  }
  if (!t.balanced()) throw Unbalanced();
  return t;
}

BigRat eval_factorial_term(const FactorialTerm& t, long n)
{
  std::map<std::string, long> vals;
  vals[t.indices[0]] = n;
  std::vector<std::string> inner(t.indices.begin() + 1, t.indices.end());

  // generous per-index bound: largest coefficient ratio times n
  long bound = 0;
  for (const auto& [f, m] : t.numerator)
    for (const auto& [k, v] : f.c) bound = std::max(bound, std::abs(v));
  for (const auto& [f, m] : t.denominator)
    for (const auto& [k, v] : f.c) bound = std::max(bound, std::abs(v));
  bound = std::max<long>(1, bound) * std::max<long>(n, 1);

  BigRat acc(0);
  std::function<void(std::size_t)> rec = [&](std::size_t idx) {
    if (idx == inner.size()) {
      BigRat term(1);
      for (const auto& [f, m] : t.numerator) {
        long v = f.eval(vals);
        if (v < 0) return;
        term *= rat_pow(BigRat(factorial((unsigned long)v)), m);
      }
      for (const auto& [f, m] : t.denominator) {
        long v = f.eval(vals);
        if (v < 0) return;
        term /= rat_pow(BigRat(factorial((unsigned long)v)), m);
      }
      for (const auto& [base, f] : t.weights) {
        long v = f.eval(vals);
        term *= rat_pow(base, v);
      }
      for (const auto& [base, f, numer] : t.pochhammers) {
        long v = f.eval(vals);
        if (v < 0) return;
        BigRat pf = pochhammer(base, (unsigned long)v);
        if (numer)
          term *= pf;
        else
          term /= pf;
      }
      acc += term;
      return;
    }
    for (long v = 0; v <= bound; ++v) {
      vals[inner[idx]] = v;
      rec(idx + 1);
    }
    vals.erase(inner[idx]);
  };
  rec(0);
  return acc;
}

// ------------------------------------------------------------ constraints --

MonomialConstraintSet derive_constraints(const FactorialTerm& input)
{
  if (!input.balanced()) throw Unbalanced();
  MonomialConstraintSet cs;

  // product template: the input is exactly a product of equal-total blocks
  if (!input.blocks.empty()) {
    bool equal_totals = true;
    for (const auto& [tot, parts] : input.blocks)
      if (!(tot == input.blocks[0].first)) equal_totals = false;
    // blocks must account for the whole term
    std::size_t block_fact_count = 0;
    for (const auto& [tot, parts] : input.blocks) block_fact_count += 1 + parts.size();
    std::size_t total_count = 0;
    for (const auto& [f, m] : input.numerator) total_count += m;
    for (const auto& [f, m] : input.denominator) total_count += m;
    if (equal_totals && block_fact_count == total_count) {
      cs.product_template = true;
      for (const auto& [tot, parts] : input.blocks) {
        std::vector<std::size_t> group;
        for (const auto& p : parts) {
          group.push_back(cs.slots.size());
          cs.slots.push_back(p);
        }
        cs.block_slots.push_back(group);
      }
      // relations per index: prod slots^{d form/d index} = t^{[index == n]}
      for (std::size_t i = 0; i < input.indices.size(); ++i) {
        MonomialRelation rel;
        rel.expo.assign(cs.slots.size(), BigRat(0));
        bool any = false;
        for (std::size_t j = 0; j < cs.slots.size(); ++j) {
          long c = cs.slots[j].coeff(input.indices[i]);
          if (c) any = true;
          rel.expo[j] = BigRat(c);
        }
        rel.t_power = i == 0 ? 1 : 0;
        if (any || i == 0) cs.relations.push_back(std::move(rel));
      }
      return cs;
    }
  }

  // single-numerator path with rewrites
  if (!input.pochhammers.empty()) throw NotMultinomialReducible();
  FactorialTerm t = input;
  t.blocks.clear();
  // cancel common numerator/denominator factorials
  for (auto& [f, m] : t.numerator)
    for (auto& [g, k] : t.denominator)
      if (f == g) {
        int c = std::min(m, k);
        m -= c;
        k -= c;
      }
  auto strip = [](std::vector<std::pair<LinForm, int>>& v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](const auto& p) { return p.second == 0; }),
            v.end());
  };
  strip(t.numerator);
  strip(t.denominator);

  auto numerator_count = [&] {
    int c = 0;
    for (const auto& [f, m] : t.numerator) c += m;
    return c;
  };
  int fresh = 0;
  while (numerator_count() > 1) {
    // pairwise Vandermonde split: (m1+m2)! / (m1!^2 m2!^2) ->
    // sum_j 1/( j! (m1-j)!^2 (m2-m1+j)! )
    bool applied = false;
    for (auto& [f, fm] : t.numerator) {
      if (fm == 0) continue;
      for (std::size_t i = 0; i < t.denominator.size() && !applied; ++i) {
        for (std::size_t j = i; j < t.denominator.size() && !applied; ++j) {
          const LinForm m1 = t.denominator[i].first; // by value: add_fact below
          const LinForm m2 = t.denominator[j].first; // reallocates the vector
          int need1 = i == j ? 4 : 2;
          if (t.denominator[i].second < need1) continue;
          if (i != j && t.denominator[j].second < 2) continue;
          if (!(m1 + m2 == f)) continue;
          // apply
          LinForm jf;
          jf.c["j" + std::to_string(fresh++)] = 1;
          t.indices.push_back(jf.c.begin()->first);
          fm -= 1;
          t.denominator[i].second -= 2;
          t.denominator[j].second -= 2;
          add_fact(t.denominator, jf, 1);
          add_fact(t.denominator, m1 - jf, 2);
          add_fact(t.denominator, (m2 - m1) + jf, 1);
          applied = true;
        }
      }
      if (applied) break;
    }
    strip(t.numerator);
    strip(t.denominator);
    if (!applied) throw NotMultinomialReducible();
  }
  if (numerator_count() != 1) throw NotMultinomialReducible();

  for (const auto& [f, m] : t.denominator)
    for (int i = 0; i < m; ++i) cs.slots.push_back(f);

  for (std::size_t i = 0; i < t.indices.size(); ++i) {
    MonomialRelation rel;
    rel.expo.assign(cs.slots.size(), BigRat(0));
    bool any = false;
    for (std::size_t j = 0; j < cs.slots.size(); ++j) {
      long c = cs.slots[j].coeff(t.indices[i]);
      if (c) any = true;
      rel.expo[j] = BigRat(c);
    }
    rel.t_power = i == 0 ? 1 : 0;
    // geometric weights a^{form}: the relation picks up the constant
    // a^{d form/d index}
    for (const auto& [base, f] : t.weights) {
      long c = f.coeff(t.indices[i]);
      if (c) rel.constant *= rat_pow(base, c);
    }
    if (any || i == 0) cs.relations.push_back(std::move(rel));
  }
  return cs;
}

// -------------------------------------------------------------- assignment --

namespace {

struct ExpoVec {
  // exponents over final variables plus a t-power; value = coeff * prod vars
  std::vector<BigRat> e;
  BigRat coeff{1};
};

const std::vector<std::string> kVarNames = {"x", "y", "z", "u", "v", "w", "r", "s"};

QExpr build_qexpr(const MonomialConstraintSet& cs, const std::vector<ExpoVec>& slots,
                  std::size_t n_vars)
{
  QExpr q;
  for (std::size_t i = 0; i < n_vars; ++i) q.variables.push_back(kVarNames[i]);
  GenPoly g;
  g.constant = 1;
  if (!cs.product_template) {
    for (const auto& s : slots) {
      GenMonomial m;
      m.coeff = CoeffSeries(-s.coeff);
      m.exponents = s.e;
      g.monomials.push_back(std::move(m));
    }
  } else {
    // expand 1 - prod_b (sum of block slots)
    std::vector<GenMonomial> prod;
    GenMonomial one;
    one.coeff = CoeffSeries(BigRat(1));
    one.exponents.assign(n_vars, BigRat(0));
    prod.push_back(one);
    for (const auto& group : cs.block_slots) {
      std::vector<GenMonomial> next;
      for (const auto& acc : prod)
        for (auto idx : group) {
          GenMonomial m;
          m.coeff = CoeffSeries(acc.coeff.constant_part() * slots[idx].coeff);
          m.exponents.assign(n_vars, BigRat(0));
          for (std::size_t v = 0; v < n_vars; ++v)
            m.exponents[v] = acc.exponents[v] + slots[idx].e[v];
          next.push_back(std::move(m));
        }
      prod = std::move(next);
    }
    for (auto& m : prod) {
      m.coeff = m.coeff.scaled(BigRat(-1));
      bool merged = false;
      for (auto& ex : g.monomials)
        if (ex.exponents == m.exponents) {
          ex.coeff.terms.push_back(m.coeff.terms[0]);
          merged = true;
          break;
        }
      if (!merged) g.monomials.push_back(std::move(m));
    }
    for (auto& m : g.monomials) {
      BigRat c(0);
      for (auto& term : m.coeff.terms) c += term.scalar;
      m.coeff = CoeffSeries(c);
    }
    g.monomials.erase(std::remove_if(g.monomials.begin(), g.monomials.end(),
                                     [](const GenMonomial& m) { return m.coeff.is_zero_coeff(); }),
                      g.monomials.end());
  }
  std::sort(g.monomials.begin(), g.monomials.end(),
            [](const GenMonomial& a, const GenMonomial& b) { return a.exponents < b.exponents; });
  q.factors.emplace_back(std::move(g), BigRat(-1));
  for (std::size_t i = 0; i < n_vars; ++i) q.diag_vars.push_back(i);
  return q;
}

} // namespace

namespace {
std::optional<QExpr> assign_with_order(const MonomialConstraintSet& cs_in, std::size_t n_vars,
                                       const std::function<bool(const QExpr&)>& accept,
                                       bool reversed);
} // namespace

std::optional<QExpr> assign_monomials(const MonomialConstraintSet& cs, std::size_t n_vars,
                                      const std::function<bool(const QExpr&)>& accept)
{
  // pivot choice follows column order; trying both orientations lets the
  // plain variables land on either end of the slot list
  if (auto q = assign_with_order(cs, n_vars, accept, true)) return q;
  return assign_with_order(cs, n_vars, accept, false);
}

namespace {
std::optional<QExpr> assign_with_order(const MonomialConstraintSet& cs_pre, std::size_t n_vars,
                                       const std::function<bool(const QExpr&)>& accept,
                                       bool reversed)
{
  MonomialConstraintSet cs = cs_pre;
  std::size_t M0 = cs.slots.size();
  std::vector<std::size_t> perm(M0);
  for (std::size_t i = 0; i < M0; ++i) perm[i] = reversed ? M0 - 1 - i : i;
  // permute slots and relation exponents; block groups follow the permutation
  {
    MonomialConstraintSet out = cs;
    for (std::size_t i = 0; i < M0; ++i) out.slots[i] = cs.slots[perm[i]];
    for (std::size_t r = 0; r < cs.relations.size(); ++r)
      for (std::size_t i = 0; i < M0; ++i)
        out.relations[r].expo[i] = cs.relations[r].expo[perm[i]];
    std::vector<std::size_t> inv(M0);
    for (std::size_t i = 0; i < M0; ++i) inv[perm[i]] = i;
    for (auto& g : out.block_slots)
      for (auto& s : g) s = inv[s];
    cs = std::move(out);
  }
  std::size_t M = cs.slots.size();
  if (n_vars > kVarNames.size()) throw NoAssignment();

  // RREF of the relation matrix to find dependent (pivot) slots
  std::size_t R = cs.relations.size();
  std::vector<std::vector<BigRat>> A(R, std::vector<BigRat>(M, BigRat(0)));
  for (std::size_t r = 0; r < R; ++r) A[r] = cs.relations[r].expo;
  std::vector<long> tpow(R);
  std::vector<BigRat> cons(R);
  for (std::size_t r = 0; r < R; ++r) {
    tpow[r] = cs.relations[r].t_power;
    cons[r] = cs.relations[r].constant;
  }
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  std::vector<BigRat> tp(R);
  for (std::size_t r = 0; r < R; ++r) tp[r] = BigRat(tpow[r]);
  // eliminate (track t-power and constants through the row operations;
  // constants combine multiplicatively so store their exponents instead)
  // For simplicity keep constants only when the elimination uses integer
  // combinations; fractional powers of the constants are rejected later.
  std::vector<std::map<std::size_t, BigRat>> comb(R); // row = comb of original relations
  for (std::size_t r = 0; r < R; ++r) comb[r][r] = 1;
  for (std::size_t col = 0; col < M && row < R; ++col) {
    std::size_t sel = R;
    for (std::size_t i = row; i < R; ++i)
      if (!is_zero(A[i][col])) { sel = i; break; }
    if (sel == R) continue;
    std::swap(A[sel], A[row]);
    std::swap(tp[sel], tp[row]);
    std::swap(comb[sel], comb[row]);
    BigRat ip = 1 / A[row][col];
    for (auto& x : A[row]) x *= ip;
    tp[row] *= ip;
    for (auto& [k, v] : comb[row]) v *= ip;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == row || is_zero(A[i][col])) continue;
      BigRat f = A[i][col];
      for (std::size_t j = 0; j < M; ++j) A[i][j] -= f * A[row][j];
      tp[i] -= f * tp[row];
      for (auto& [k, v] : comb[row]) comb[i][k] -= f * v;
    }
    pivots.push_back(col);
    ++row;
  }
  // consistency rows: all-zero exponents must have zero t-power
  for (std::size_t i = row; i < R; ++i)
    if (!is_zero(tp[i])) throw NoAssignment();

  std::vector<bool> is_pivot(M, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_slots;
  for (std::size_t j = 0; j < M; ++j)
    if (!is_pivot[j]) free_slots.push_back(j);

  // derived slot j (pivot row r): expo_j = t^{tp_r} * prod_free f^{-A[r][f]}
  // with constant from the relation combination
  std::vector<ExpoVec> values(M);
  for (auto& v : values) v.e.assign(n_vars, BigRat(0));

  // candidate generators for free slots
  struct Cand {
    std::vector<BigRat> e;
    int fresh_used; // number of fresh variables consumed (0 or 1)
  };
  std::optional<QExpr> found;

  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t fi, std::size_t used) {
    if (found) return;
    if (fi == free_slots.size()) {
      if (used > n_vars) return;
      // solve dependent slots
      std::vector<ExpoVec> vals = values;
      for (std::size_t r = 0; r < pivots.size(); ++r) {
        std::size_t j = pivots[r];
        ExpoVec ev;
        ev.e.assign(n_vars, BigRat(0));
        // t^{tp_r}: exponent tp_r on every variable
        for (std::size_t v = 0; v < n_vars; ++v) ev.e[v] = tp[r];
        BigRat cexp(1);
        for (const auto& [orig, w] : comb[r]) {
          if (is_zero(w)) continue;
          auto c0 = cs.relations[orig].constant;
          if (c0 != 1) {
            auto pw = is_integer(w) ? std::optional<BigRat>(rat_pow(c0, to_long(w)))
                                    : std::nullopt;
            if (!pw) return;
            cexp *= *pw;
          }
        }
        for (auto f : free_slots) {
          if (is_zero(A[r][f])) continue;
          for (std::size_t v = 0; v < n_vars; ++v) ev.e[v] -= A[r][f] * vals[f].e[v];
          // constants of free slots are 1
        }
        ev.coeff = cexp;
        for (const auto& e : ev.e)
          if (sgn(e) < 0) return; // negative exponent: reject
        vals[j] = std::move(ev);
      }
      // every declared variable must actually occur
      std::vector<bool> seen(n_vars, false);
      for (const auto& ev : vals)
        for (std::size_t v = 0; v < n_vars; ++v)
          if (!is_zero(ev.e[v])) seen[v] = true;
      for (bool s : seen)
        if (!s) return;
      QExpr q = build_qexpr(cs, vals, n_vars);
      if (!accept || accept(q)) found = q;
      return;
    }
    std::size_t j = free_slots[fi];
    // candidates: fresh variable to a 1/d power, then products with earlier vars
    for (int d = 1; d <= 6 && !found; ++d) {
      if (used >= n_vars) break;
      ExpoVec ev;
      ev.e.assign(n_vars, BigRat(0));
      ev.e[used] = rat(1, d);
      values[j] = ev;
      rec(fi + 1, used + 1);
    }
    if (found) return;
    for (std::size_t pv = 0; pv < used && !found; ++pv) {
      if (used >= n_vars) break;
      ExpoVec ev;
      ev.e.assign(n_vars, BigRat(0));
      ev.e[pv] = 1;
      ev.e[used] = 1;
      values[j] = ev;
      rec(fi + 1, used + 1);
    }
    // reuse of existing variables alone (no fresh): products of two previous
    for (std::size_t p1 = 0; p1 < used && !found; ++p1)
      for (std::size_t p2 = p1 + 1; p2 < used && !found; ++p2) {
        ExpoVec ev;
        ev.e.assign(n_vars, BigRat(0));
        ev.e[p1] = 1;
        ev.e[p2] = 1;
        values[j] = ev;
        rec(fi + 1, used);
      }
    // the constant slot 1 (only meaningful inside block factors)
    if (!found && cs.product_template) {
      ExpoVec ev;
      ev.e.assign(n_vars, BigRat(0));
      values[j] = ev;
      rec(fi + 1, used);
    }
  };
  rec(0, 0);
  return found;
}
} // namespace

bool verify_candidate(const QExpr& q, const std::function<BigRat(long)>& oracle, long n_terms)
{
  try {
    TruncSeries d = diagonal(q, n_terms, DiagEngine::Fast);
    for (long n = 0; n < n_terms; ++n)
      if (d[n] != oracle(n)) return false;
    return true;
  } catch (const NonNormalizedExpr&) {
    return false;
  }
}

IntertwinerCondition order_one_intertwiner_condition(const ExponentMatrix& em)
{
  IntertwinerCondition out;
  std::size_t V = em.A.size();
  std::size_t M = V ? em.A[0].size() : 0;
  if (M > V + 2 || M < V) throw UnderdeterminedSystem();
  // RREF of A
  std::vector<std::vector<BigRat>> A(V, std::vector<BigRat>(M));
  for (std::size_t i = 0; i < V; ++i) A[i] = em.A[i];
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < M && row < V; ++col) {
    std::size_t sel = V;
    for (std::size_t i = row; i < V; ++i)
      if (!is_zero(A[i][col])) { sel = i; break; }
    if (sel == V) continue;
    std::swap(A[sel], A[row]);
    BigRat ip = 1 / A[row][col];
    for (auto& x : A[row]) x *= ip;
    for (std::size_t i = 0; i < V; ++i) {
      if (i == row || is_zero(A[i][col])) continue;
      BigRat f = A[i][col];
      for (std::size_t j = 0; j < M; ++j) A[i][j] -= f * A[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  if (row < V) throw UnderdeterminedSystem();
  // kernel vectors: every free column gives one; the condition is that each
  // has coordinate sum zero
  std::vector<bool> is_pivot(M, false);
  for (auto c : pivots) is_pivot[c] = true;
  out.holds = true;
  for (std::size_t f = 0; f < M; ++f) {
    if (is_pivot[f]) continue;
    BigRat sum(1); // the free coordinate itself
    for (std::size_t r = 0; r < pivots.size(); ++r) sum += -A[r][f];
    if (!is_zero(sum)) out.holds = false;
  }
  if (!out.holds) return out;
  // particular solution of A v = 1 with free coordinates zero
  // re-reduce the augmented system
  std::vector<std::vector<BigRat>> B(V, std::vector<BigRat>(M + 1));
  for (std::size_t i = 0; i < V; ++i) {
    for (std::size_t j = 0; j < M; ++j) B[i][j] = em.A[i][j];
    B[i][M] = 1;
  }
  row = 0;
  std::vector<std::size_t> piv2;
  for (std::size_t col = 0; col < M && row < V; ++col) {
    std::size_t sel = V;
    for (std::size_t i = row; i < V; ++i)
      if (!is_zero(B[i][col])) { sel = i; break; }
    if (sel == V) continue;
    std::swap(B[sel], B[row]);
    BigRat ip = 1 / B[row][col];
    for (auto& x : B[row]) x *= ip;
    for (std::size_t i = 0; i < V; ++i) {
      if (i == row || is_zero(B[i][col])) continue;
      BigRat f = B[i][col];
      for (std::size_t j = 0; j <= M; ++j) B[i][j] -= f * B[row][j];
    }
    piv2.push_back(col);
    ++row;
  }
  BigRat a(0);
  for (std::size_t r = 0; r < piv2.size(); ++r) a += B[r][M];
  out.slope = a;
  return out;
}

bool verify_power_relation(const QExpr& q, const BigRat& a, long n_terms)
{
  QExpr squared = q;
  for (auto& [g, alpha] : squared.factors) alpha = BigRat(-2);
  TruncSeries d1 = diagonal(q, n_terms, DiagEngine::Fast);
  TruncSeries d2 = diagonal(squared, n_terms, DiagEngine::Fast);
  for (long n = 0; n < n_terms; ++n)
    if (d2[n] != a * BigRat(n) * d1[n] + d1[n]) return false;
  return true;
}

} // namespace diag
