#include <diagonals/diagonal.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <numeric>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace diag {

namespace {

std::uint64_t default_work_budget()
{
  if (const char* env = std::getenv("DIAGONALS_WORK_BUDGET"))
    return std::strtoull(env, nullptr, 10);
  return 400000000ull;
}

long lcm_long(long a, long b)
{
  return a / std::gcd(a, b) * b;
}

// integer scaling per variable: row multiplier clearing every denominator
std::vector<long> variable_scales(const QExpr& q)
{
  std::vector<long> L(q.n_vars(), 1);
  auto see = [&](const GenPoly& g) {
    for (const auto& m : g.monomials)
      for (std::size_t v = 0; v < m.exponents.size(); ++v)
        L[v] = lcm_long(L[v], to_long(BigInt(m.exponents[v].get_den())));
  };
  see(q.numerator);
  for (const auto& [g, a] : q.factors) see(g);
  return L;
}

} // namespace

ExponentMatrix exponent_matrix(const QExpr& q)
{
  ExponentMatrix em;
  em.A.assign(q.diag_vars.size(), {});
  for (std::size_t f = 0; f < q.factors.size(); ++f) {
    const auto& [g, a] = q.factors[f];
    em.alpha.push_back(a);
    for (const auto& m : g.monomials) {
      em.factor_of.push_back(f);
      em.c.push_back(m.coeff);
      for (std::size_t r = 0; r < q.diag_vars.size(); ++r)
        em.A[r].push_back(m.exponents[q.diag_vars[r]]);
    }
  }
  return em;
}

// ------------------------------------------------------------ brute force --

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<long>& v) const
  {
    std::size_t h = 1469598103934665603ull;
    for (long x : v) {
      h ^= (std::size_t)x + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

using ExpMap = std::unordered_map<std::vector<long>, BigRat, VecHash>;

struct BruteContext {
  const QExpr& q;
  long N;
  std::vector<long> L;            // per-variable scale
  std::vector<long> box;          // max allowed scaled exponent per variable (diag vars)
  std::vector<bool> is_diag;      // per variable
  std::uint64_t budget;
  std::uint64_t work = 0;

  explicit BruteContext(const QExpr& qq, long n, std::uint64_t budget_override = 0)
      : q(qq), N(n)
  {
    L = variable_scales(q);
    is_diag.assign(q.n_vars(), false);
    for (auto v : q.diag_vars) is_diag[v] = true;
    // every monomial use consumes at least one unit of scaled diagonal
    // progress, so total uses K <= sum over diag vars of N * L_v; spectator
    // exponents are bounded by their largest per-monomial exponent times K
    long K = 0;
    for (auto v : q.diag_vars) K += (N + 1) * L[v];
    long max_spect = 1;
    auto see = [&](const GenPoly& g) {
      for (const auto& m : g.monomials)
        for (std::size_t v = 0; v < q.n_vars(); ++v)
          if (!is_diag[v] && !is_zero(m.exponents[v])) {
            BigRat e = m.exponents[v];
            if (is_integer(e)) max_spect = std::max(max_spect, to_long(e));
          }
    };
    see(q.numerator);
    for (const auto& [g, a] : q.factors) see(g);
    box.assign(q.n_vars(), 0);
    for (std::size_t v = 0; v < q.n_vars(); ++v)
      box[v] = is_diag[v] ? N * L[v] : max_spect * K;
    budget = budget_override ? budget_override : default_work_budget();
  }

  void tick(long p)
  {
    if (++work > budget) throw TruncationTooDeep(p);
  }

  bool in_box(const std::vector<long>& e) const
  {
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v] > box[v]) return false;
    return true;
  }

  // monomial list of a GenPoly as scaled exponent vectors with expanded
  // series coefficients (t^m adds m*L_v on every diagonal variable);
  // factor monomials must make diagonal progress, numerator ones need not
  ExpMap monomials_map(const GenPoly& g, bool require_progress) const
  {
    ExpMap out;
    for (const auto& m : g.monomials) {
      std::vector<long> base(q.n_vars(), 0);
      for (std::size_t v = 0; v < q.n_vars(); ++v) {
        BigRat scaled = m.exponents[v] * BigRat(L[v]);
        assert(is_integer(scaled));
        base[v] = to_long(scaled);
      }
      if (m.coeff.is_constant()) {
        BigRat c = m.coeff.constant_part();
        if (!is_zero(c) && in_box(base)) out[base] += c;
        continue;
      }
      TruncSeries cs = m.coeff.expand(N);
      for (long t = 0; t <= N; ++t) {
        if (is_zero(cs[t])) continue;
        std::vector<long> e = base;
        for (auto v : q.diag_vars) e[v] += t * L[v];
        if (in_box(e)) out[e] += cs[t];
      }
    }
    if (require_progress)
      for (const auto& [e, c] : out) {
        long s = 0;
        for (auto v : q.diag_vars) s += e[v];
        if (s == 0)
          throw NonNormalizedExpr("factor monomial without diagonal-variable progress");
      }
    return out;
  }
};

ExpMap map_mul(BruteContext& ctx, const ExpMap& a, const ExpMap& b, long p)
{
  ExpMap r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      ctx.tick(p);
      std::vector<long> e(ea.size());
      bool ok = true;
      for (std::size_t v = 0; v < e.size(); ++v) {
        e[v] = ea[v] + eb[v];
        if (e[v] > ctx.box[v]) { ok = false; break; }
      }
      if (!ok) continue;
      r[e] += ca * cb;
    }
  for (auto it = r.begin(); it != r.end();)
    it = is_zero(it->second) ? r.erase(it) : std::next(it);
  return r;
}

// full multi-Taylor expansion of numerator * prod factors^alpha inside the box
ExpMap brute_expand(BruteContext& ctx)
{
  ExpMap acc;
  acc[std::vector<long>(ctx.q.n_vars(), 0)] = BigRat(1);
  for (const auto& [g, alpha] : ctx.q.factors) {
    ExpMap M = ctx.monomials_map(g, true);
    // (1 - M)^alpha = sum_k (-alpha)_k / k! M^k  -- here g = constant + monomials
    // with constant forced to 1, so M is the negated monomial part
    ExpMap Mneg;
    for (const auto& [e, c] : M) Mneg[e] = -c;
    ExpMap fact;
    fact[std::vector<long>(ctx.q.n_vars(), 0)] = BigRat(1);
    ExpMap power = fact; // M^k
    BigRat w(1);         // (-alpha)_k / k!
    for (long k = 1;; ++k) {
      power = map_mul(ctx, power, Mneg, 0);
      if (power.empty()) break;
      w = w * (-alpha + BigRat(k - 1)) / BigRat(k);
      for (const auto& [e, c] : power) fact[e] += w * c;
    }
    acc = map_mul(ctx, acc, fact, 0);
  }
  // numerator: constant + monomials
  ExpMap numer = ctx.monomials_map(ctx.q.numerator, false);
  numer[std::vector<long>(ctx.q.n_vars(), 0)] += ctx.q.numerator.constant;
  acc = map_mul(ctx, acc, numer, 0);
  return acc;
}

} // namespace

TruncSeries diag_brute_force(const QExpr& q, long n)
{
  return diag_brute_force_budget(q, n, 0);
}

TruncSeries diag_brute_force_budget(const QExpr& q, long n, std::uint64_t budget)
{
  BruteContext ctx(q, n, budget);
  ExpMap full = brute_expand(ctx);
  std::vector<BigRat> out(n + 1, BigRat(0));
  for (long p = 0; p <= n; ++p) {
    std::vector<long> key(q.n_vars(), 0);
    for (std::size_t v = 0; v < q.n_vars(); ++v)
      key[v] = ctx.is_diag[v] ? p * ctx.L[v] : 0;
    auto it = full.find(key);
    if (it != full.end()) out[p] = it->second;
  }
  return TruncSeries(std::move(out));
}

// -------------------------------------------------------------- fast path --

namespace {

struct FastContext {
  const QExpr& q;
  long N;
  std::vector<long> L;
  std::uint64_t budget;
  std::atomic<std::uint64_t> work{0};

  // stacked monomials with constant coefficients
  std::vector<std::vector<long>> col;   // [monomial][diag var] scaled exponents
  std::vector<BigRat> coeff;            // constant coefficient (negated monomial part)
  std::vector<std::size_t> factor_of;
  std::vector<BigRat> alpha;
  std::vector<std::vector<long>> covered_after; // suffix coverage per variable

  bool usable = true;

  FastContext(const QExpr& qq, long n, std::uint64_t budget_override = 0) : q(qq), N(n)
  {
    L = variable_scales(q);
    budget = budget_override ? budget_override : default_work_budget();
    for (std::size_t f = 0; f < q.factors.size(); ++f) {
      const auto& [g, a] = q.factors[f];
      alpha.push_back(a);
      for (const auto& m : g.monomials) {
        if (!m.coeff.is_constant()) { usable = false; return; }
        std::vector<long> e(q.diag_vars.size(), 0);
        bool progress = false;
        for (std::size_t r = 0; r < q.diag_vars.size(); ++r) {
          BigRat scaled = m.exponents[q.diag_vars[r]] * BigRat(L[q.diag_vars[r]]);
          assert(is_integer(scaled));
          e[r] = to_long(scaled);
          if (e[r] > 0) progress = true;
        }
        // spectators are not allowed on the fast path
        for (std::size_t v = 0; v < q.n_vars(); ++v) {
          bool in_diag = std::find(q.diag_vars.begin(), q.diag_vars.end(), v) != q.diag_vars.end();
          if (!in_diag && !is_zero(m.exponents[v])) { usable = false; return; }
        }
        if (!progress) { usable = false; return; }
        col.push_back(std::move(e));
        coeff.push_back(-m.coeff.constant_part());
        factor_of.push_back(f);
      }
    }
    // order columns: densest support first tightens pruning
    std::vector<std::size_t> order(col.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a2, std::size_t b2) {
      int sa = 0, sb = 0;
      for (auto x : col[a2]) sa += x > 0;
      for (auto x : col[b2]) sb += x > 0;
      return sa > sb;
    });
    std::vector<std::vector<long>> ncol;
    std::vector<BigRat> ncoeff;
    std::vector<std::size_t> nfac;
    for (auto i : order) {
      ncol.push_back(col[i]);
      ncoeff.push_back(coeff[i]);
      nfac.push_back(factor_of[i]);
    }
    col = std::move(ncol);
    coeff = std::move(ncoeff);
    factor_of = std::move(nfac);

    covered_after.assign(col.size() + 1, std::vector<long>(q.diag_vars.size(), 0));
    for (std::size_t j = col.size(); j-- > 0;) {
      covered_after[j] = covered_after[j + 1];
      for (std::size_t r = 0; r < q.diag_vars.size(); ++r)
        if (col[j][r] > 0) covered_after[j][r] = 1;
    }
  }

  void tick(long p)
  {
    if (work.fetch_add(1, std::memory_order_relaxed) + 1 > budget)
      throw TruncationTooDeep(p);
  }

  // DFS over monomial multiplicities; accumulates the Pochhammer-weighted sum
  void dfs(std::size_t j, std::vector<long>& rem, std::vector<long>& kf, BigRat& acc,
           BigRat partial, long p)
  {
    tick(p);
    bool rem_zero = std::all_of(rem.begin(), rem.end(), [](long x) { return x == 0; });
    if (j == col.size()) {
      if (!rem_zero) return;
      // weight: prod_f (-alpha_f)_{K_f} / prod_j k_j! times prod c_j^{k_j}
      BigRat w = partial;
      for (std::size_t f = 0; f < alpha.size(); ++f)
        w *= pochhammer(-alpha[f], (unsigned long)kf[f]);
      acc += w;
      return;
    }
    // prune: variables not covered by the suffix must already be satisfied
    for (std::size_t r = 0; r < rem.size(); ++r)
      if (rem[r] > 0 && !covered_after[j][r]) return;
    long kmax = -1;
    for (std::size_t r = 0; r < rem.size(); ++r)
      if (col[j][r] > 0) {
        long b = rem[r] / col[j][r];
        kmax = kmax < 0 ? b : std::min(kmax, b);
      }
    if (kmax < 0) kmax = 0; // cannot happen: every column has progress
    BigRat cpow(1);
    for (long k = 0; k <= kmax; ++k) {
      if (k > 0) {
        for (std::size_t r = 0; r < rem.size(); ++r) rem[r] -= col[j][r];
        ++kf[factor_of[j]];
        cpow *= coeff[j];
        cpow /= BigRat(k); // fold 1/k_j! into the running product
      }
      dfs(j + 1, rem, kf, acc, partial * cpow, p);
    }
    for (long k = 0; k < kmax; ++k) {
      for (std::size_t r = 0; r < rem.size(); ++r) rem[r] += col[j][r];
      --kf[factor_of[j]];
    }
  }

  BigRat coefficient(long p, const std::vector<long>& numerator_offset)
  {
    std::vector<long> rem(q.diag_vars.size());
    for (std::size_t r = 0; r < q.diag_vars.size(); ++r) {
      rem[r] = p * L[q.diag_vars[r]] - numerator_offset[r];
      if (rem[r] < 0) return BigRat(0);
    }
    std::vector<long> kf(alpha.size(), 0);
    BigRat acc(0);
    dfs(0, rem, kf, acc, BigRat(1), p);
    return acc;
  }
};

} // namespace

TruncSeries diagonal(const DiagRequest& req)
{
  const QExpr& q = req.expr;
  long n = req.n_terms - 1;
  if (n < 0) n = 0;
  for (const auto& [g, a] : q.factors)
    if (g.constant != 1) throw NonNormalizedExpr("factor constant term != 1");

  bool want_fast = req.engine != DiagEngine::BruteForce;
  TruncSeries fast_result;
  bool have_fast = false;
  if (want_fast) {
    FastContext ctx(q, n, req.work_budget);
    bool numerator_ok = ctx.usable;
    std::vector<std::pair<std::vector<long>, BigRat>> offsets; // numerator terms
    if (numerator_ok) {
      if (!is_zero(q.numerator.constant))
        offsets.emplace_back(std::vector<long>(q.diag_vars.size(), 0), q.numerator.constant);
      for (const auto& m : q.numerator.monomials) {
        if (!m.coeff.is_constant()) { numerator_ok = false; break; }
        std::vector<long> off(q.diag_vars.size(), 0);
        for (std::size_t r = 0; r < q.diag_vars.size(); ++r) {
          BigRat scaled = m.exponents[q.diag_vars[r]] * BigRat(ctx.L[q.diag_vars[r]]);
          if (!is_integer(scaled)) { numerator_ok = false; break; }
          off[r] = to_long(scaled);
        }
        for (std::size_t v = 0; v < q.n_vars() && numerator_ok; ++v) {
          bool in_diag =
              std::find(q.diag_vars.begin(), q.diag_vars.end(), v) != q.diag_vars.end();
          if (!in_diag && !is_zero(m.exponents[v])) numerator_ok = false;
        }
        if (!numerator_ok) break;
        offsets.emplace_back(std::move(off), m.coeff.constant_part());
      }
    }
    if (ctx.usable && numerator_ok) {
      // degrees are independent; split them over a small worker pool and
      // merge in order
      std::vector<BigRat> out(n + 1, BigRat(0));
      unsigned hw = std::min<unsigned>(std::thread::hardware_concurrency(), 4);
      // explicitly budget-constrained runs stay sequential so the failure
      // degree is reproducible
      if (n >= 12 && hw >= 2 && req.work_budget == 0) {
        std::atomic<long> next{0};
        std::exception_ptr err;
        std::mutex err_mu;
        auto worker = [&] {
          try {
            for (;;) {
              long p = next.fetch_add(1);
              if (p > n) break;
              BigRat acc(0);
              for (const auto& [off, c] : offsets) acc += c * ctx.coefficient(p, off);
              out[p] = std::move(acc);
            }
          } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!err) err = std::current_exception();
          }
        };
        std::vector<std::thread> pool;
        for (unsigned i = 1; i < hw; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
      } else {
        for (long p = 0; p <= n; ++p)
          for (const auto& [off, c] : offsets) out[p] += c * ctx.coefficient(p, off);
      }
      fast_result = TruncSeries(std::move(out));
      have_fast = true;
    } else if (req.engine == DiagEngine::Fast) {
      // fall through to brute force; the fast path does not cover this input
    }
  }

  if (req.engine == DiagEngine::Fast && have_fast) return fast_result;
  TruncSeries brute = diag_brute_force_budget(q, n, req.work_budget);
  if (req.engine == DiagEngine::Both && have_fast) {
    if (!(brute == fast_result))
      throw NonNormalizedExpr("fast path disagrees with brute-force oracle");
  }
  return brute;
}

// ----------------------------------------------------------- subset diag --

std::vector<SpectatorPoly> diag_subset(const QExpr& q, const std::vector<std::string>& subset,
                                       long n_terms)
{
  QExpr sub = q;
  sub.diag_vars.clear();
  for (const auto& name : subset) {
    auto it = std::find(sub.variables.begin(), sub.variables.end(), name);
    if (it == sub.variables.end()) throw NonNormalizedExpr("unknown subset variable " + name);
    sub.diag_vars.push_back(it - sub.variables.begin());
  }
  assert(!sub.diag_vars.empty());
  long n = n_terms - 1;
  BruteContext ctx(sub, n);
  ExpMap full = brute_expand(ctx);
  std::vector<bool> in_sub(sub.n_vars(), false);
  for (auto v : sub.diag_vars) in_sub[v] = true;
  std::vector<SpectatorPoly> out(n + 1);
  for (const auto& [e, c] : full) {
    long p = -1;
    bool diagonal = true;
    for (auto v : sub.diag_vars) {
      if (e[v] % ctx.L[v] != 0) { diagonal = false; break; }
      long pv = e[v] / ctx.L[v];
      if (p < 0)
        p = pv;
      else if (p != pv)
        diagonal = false;
    }
    if (!diagonal || p < 0 || p > n) continue;
    std::vector<long> spect;
    for (std::size_t v = 0; v < sub.n_vars(); ++v)
      if (!in_sub[v]) spect.push_back(e[v]);
    out[p].terms[spect] += c;
  }
  return out;
}

TruncSeries spectator_eval(const std::vector<SpectatorPoly>& coeffs,
                           const std::vector<BigRat>& values)
{
  std::vector<BigRat> out(coeffs.size(), BigRat(0));
  for (std::size_t p = 0; p < coeffs.size(); ++p)
    for (const auto& [e, c] : coeffs[p].terms) {
      BigRat term = c;
      for (std::size_t v = 0; v < e.size(); ++v) term *= rat_pow(values[v], e[v]);
      out[p] += term;
    }
  return TruncSeries(std::move(out));
}

TruncSeries bivariate_diag(const BivarSeries& s, long n_terms)
{
  long n = n_terms - 1;
  if (2 * n > s.total_degree) throw InsufficientDegree();
  std::vector<BigRat> out(n + 1);
  for (long i = 0; i <= n; ++i) out[i] = s.at(i, i);
  return TruncSeries(std::move(out));
}

bool global_product_factor_property_check(const TruncSeries& c, const QExpr& expr, long n_terms)
{
  long n = std::min<long>(n_terms - 1, c.trunc_order());
  // left side: multiply c into the expression as a zero-exponent numerator
  // monomial; right side: c(t) * Diag(F)
  TruncSeries base = diag_brute_force(expr, n);
  QExpr with = expr;
  GenMonomial gm;
  gm.exponents.assign(with.n_vars(), BigRat(0));
  for (long m = 0; m <= n; ++m) {
    if (is_zero(c[m])) continue;
    CoeffSeries::Term term;
    term.scalar = c[m];
    if (m > 0) term.tpowers.emplace_back(UniPoly::monomial(BigRat(1), 1), BigRat(m));
    gm.coeff.terms.push_back(term);
  }
  // fold the old numerator: multiply is only supported for constant numerators here
  assert(with.numerator.monomials.empty());
  BigRat numc = with.numerator.constant;
  with.numerator.constant = 0;
  gm.coeff = gm.coeff.scaled(numc);
  with.numerator.monomials.push_back(gm);
  TruncSeries lhs = diag_brute_force(with, n);
  TruncSeries rhs = (c * base).truncated(n);
  return lhs == rhs;
}

// --------------------------------------- effective variable reduction ----

namespace {

QExpr drop_monomial(const QExpr& q, std::size_t idx)
{
  QExpr out = q;
  out.factors[0].first.monomials.erase(out.factors[0].first.monomials.begin() + idx);
  return out;
}

QExpr scale_monomial(const QExpr& q, std::size_t idx, const BigRat& s)
{
  QExpr out = q;
  auto& m = out.factors[0].first.monomials[idx];
  m.coeff = m.coeff.scaled(s);
  return out;
}

QExpr merge_pair(const QExpr& q, std::size_t vi, std::size_t vj)
{
  // variables vi and vj occur only as a product with equal exponents:
  // drop vj, keep vi's exponent
  QExpr out;
  out.variables = q.variables;
  out.variables.erase(out.variables.begin() + vj);
  auto strip = [&](const GenPoly& g) {
    GenPoly ng;
    ng.constant = g.constant;
    for (const auto& m : g.monomials) {
      GenMonomial nm;
      nm.coeff = m.coeff;
      for (std::size_t v = 0; v < q.n_vars(); ++v)
        if (v != vj) nm.exponents.push_back(m.exponents[v]);
      ng.monomials.push_back(std::move(nm));
    }
    return ng;
  };
  out.numerator = strip(q.numerator);
  for (const auto& [g, a] : q.factors) out.factors.emplace_back(strip(g), a);
  for (std::size_t i = 0; i < out.variables.size(); ++i) out.diag_vars.push_back(i);
  return out;
}

QExpr drop_unused_variables(const QExpr& q, std::vector<std::string>* log)
{
  std::vector<bool> used(q.n_vars(), false);
  auto see = [&](const GenPoly& g) {
    for (const auto& m : g.monomials)
      for (std::size_t v = 0; v < q.n_vars(); ++v)
        if (!is_zero(m.exponents[v])) used[v] = true;
  };
  see(q.numerator);
  for (const auto& [g, a] : q.factors) see(g);
  QExpr out;
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < q.n_vars(); ++v)
    if (used[v])
      keep.push_back(v);
    else if (log)
      log->push_back("dropped unused variable " + q.variables[v]);
  if (keep.size() == q.n_vars()) return q;
  for (auto v : keep) out.variables.push_back(q.variables[v]);
  auto strip = [&](const GenPoly& g) {
    GenPoly ng;
    ng.constant = g.constant;
    for (const auto& m : g.monomials) {
      GenMonomial nm;
      nm.coeff = m.coeff;
      for (auto v : keep) nm.exponents.push_back(m.exponents[v]);
      ng.monomials.push_back(std::move(nm));
    }
    return ng;
  };
  out.numerator = strip(q.numerator);
  for (const auto& [g, a] : q.factors) out.factors.emplace_back(strip(g), a);
  for (std::size_t i = 0; i < out.variables.size(); ++i) out.diag_vars.push_back(i);
  return out;
}

} // namespace

ReductionReport effective_variable_reduction(const QExpr& q, long check_terms)
{
  ReductionReport rep;
  rep.reduced = q;
  if (q.factors.size() != 1 || q.factors[0].second != -1 || !q.diag_all()) return rep;
  for (const auto& m : q.factors[0].first.monomials)
    if (!m.coeff.is_constant()) return rep;

  QExpr cur = q;
  bool changed = true;
  while (changed) {
    changed = false;
    TruncSeries base = diag_brute_force(cur, check_terms);
    // (a) monomials invisible to the diagonal
    for (std::size_t i = 0; i < cur.factors[0].first.monomials.size(); ++i) {
      TruncSeries perturbed = diag_brute_force(scale_monomial(cur, i, rat(5, 3)), check_terms);
      if (perturbed == base) {
        rep.steps.push_back("monomial #" + std::to_string(i) +
                            " is invisible to the diagonal (perturbation test); dropped");
        cur = drop_monomial(cur, i);
        cur = drop_unused_variables(cur, &rep.steps);
        changed = true;
        break;
      }
    }
    if (changed) continue;
    // (b) variable pairs occurring only as a product
    for (std::size_t vi = 0; vi < cur.n_vars() && !changed; ++vi)
      for (std::size_t vj = vi + 1; vj < cur.n_vars() && !changed; ++vj) {
        bool pair = true;
        for (const auto& m : cur.factors[0].first.monomials)
          if (m.exponents[vi] != m.exponents[vj]) { pair = false; break; }
        if (!pair) continue;
        rep.steps.push_back("variables " + cur.variables[vi] + " and " + cur.variables[vj] +
                            " only occur as a product; merged");
        cur = merge_pair(cur, vi, vj);
        changed = true;
      }
  }
  // soundness: N-term comparison against the input
  if (!(diag_brute_force(cur, check_terms) == diag_brute_force(q, check_terms)))
    return rep; // keep the input unchanged if anything went off
  rep.changed = !(cur.n_vars() == q.n_vars() &&
                  cur.factors[0].first.monomials.size() == q.factors[0].first.monomials.size());
  rep.reduced = cur;
  return rep;
}

} // namespace diag
