#include <diagonals/opalgebra.hpp>

#include <diagonals/modp.hpp>

#include <algorithm>

namespace diag {

namespace {

// exact reduced row echelon; returns all canonical nullspace basis vectors
std::vector<std::vector<BigRat>> exact_nullspace_dense(std::vector<std::vector<BigRat>>& m,
                                                       std::size_t cols)
{
  std::size_t rows = m.size();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = rows;
    for (std::size_t i = row; i < rows; ++i)
      if (!is_zero(m[i][col])) { sel = i; break; }
    if (sel == rows) continue;
    std::swap(m[sel], m[row]);
    BigRat ip = 1 / m[row][col];
    for (std::size_t j = col; j < cols; ++j) m[row][j] *= ip;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || is_zero(m[i][col])) continue;
      BigRat f = m[i][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<BigRat>> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<BigRat> v(cols, BigRat(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace

// -------------------------------------------------------- intertwiners ---

namespace {

// remainders of D^m modulo L1 for m = 0 .. top, as RatOps of order < r1
std::vector<RatOp> power_remainders(const DiffOp& L1, long top)
{
  long r1 = L1.order();
  std::vector<RatOp> rem;
  for (long m = 0; m <= top; ++m) {
    if (m < r1) {
      std::vector<RatFun> c(m + 1);
      c[m] = RatFun(BigRat(1));
      rem.emplace_back(std::move(c));
      continue;
    }
    // D * rem[m-1], then reduce the D^{r1} term via L1
    RatOp dr = RatOp(DiffOp::derivation()) * rem[m - 1];
    if (dr.order() >= r1) {
      RatFun lead = dr.coeff(r1);
      std::vector<RatFun> c(dr.coeffs());
      c.resize(r1 + 1);
      // D^{r1} = -(1/a_{r1}) sum_{i<r1} a_i D^i  (mod L1)
      for (long i = 0; i < r1; ++i)
        c[i] = c[i] - lead * RatFun(L1.coeff(i)) / RatFun(L1.coeff(r1));
      c.resize(r1);
      dr = RatOp(std::move(c));
    }
    rem.push_back(std::move(dr));
  }
  return rem;
}

} // namespace

std::optional<Intertwiner> intertwiner_search(const DiffOp& L1, const DiffOp& L2,
                                              long max_order, long max_degree)
{
  long r1 = L1.order();
  long r2 = L2.order();
  if (r1 < 1) return std::nullopt;
  auto REM = power_remainders(L1, r2 + max_order);

  auto primes = guessing_primes(1);
  PrimeField F(primes[0]);

  for (long w = 0; w <= max_order; ++w) {
    std::size_t cols = (std::size_t)(w + 1) * (max_degree + 1);
    // remainder of L2 * t^j D^i as a rational combination of REM[.]:
    // rem(L2 t^j D^i) = sum_{m,k} b_m C(m,k) ff(j,k) t^{j-k} REM[m+i-k]
    // (left multiplication by polynomials commutes with right reduction)
    std::vector<std::vector<RatFun>> entries(cols,
                                             std::vector<RatFun>(std::max<long>(r1, 1)));
    for (long i = 0; i <= w; ++i)
      for (long j = 0; j <= max_degree; ++j) {
        std::size_t cidx = (std::size_t)i * (max_degree + 1) + j;
        for (long m = 0; m <= r2; ++m) {
          if (L2.coeff(m).is_zero_poly()) continue;
          for (long k = 0; k <= std::min<long>(m, j); ++k) {
            BigRat ff(1);
            for (long u = 0; u < k; ++u) ff *= BigRat(j - u);
            BigRat cmk = BigRat(binomial((unsigned long)m, (unsigned long)k)) * ff;
            if (is_zero(cmk)) continue;
            UniPoly tcoef = L2.coeff(m) * UniPoly::monomial(cmk, j - k);
            const RatOp& R = REM[m + i - k];
            for (long dpow = 0; dpow <= R.order(); ++dpow) {
              if (R.coeff(dpow).is_zero()) continue;
              entries[cidx][dpow] = entries[cidx][dpow] + RatFun(tcoef) * R.coeff(dpow);
            }
          }
        }
      }
    // common denominator per D-power across columns
    long rows_per = std::max<long>(r1, 1);
    std::vector<UniPoly> denoms(rows_per, UniPoly(BigRat(1)));
    for (std::size_t c = 0; c < cols; ++c)
      for (long k = 0; k < rows_per; ++k) {
        const RatFun& f = entries[c][k];
        if (f.is_zero()) continue;
        UniPoly g = poly_gcd(denoms[k], f.den());
        UniPoly q, r;
        UniPoly::divmod(f.den(), g, q, r);
        denoms[k] = denoms[k] * q;
      }
    long maxdeg = 0;
    std::vector<std::vector<UniPoly>> numer(cols, std::vector<UniPoly>(rows_per));
    for (std::size_t c = 0; c < cols; ++c)
      for (long k = 0; k < rows_per; ++k) {
        const RatFun& f = entries[c][k];
        if (f.is_zero()) continue;
        UniPoly q, r;
        UniPoly::divmod(denoms[k], f.den(), q, r);
        numer[c][k] = f.num() * q;
        maxdeg = std::max(maxdeg, numer[c][k].degree());
      }
    std::size_t nrows = (std::size_t)rows_per * (maxdeg + 1);

    // mod-p prescreen: full column rank certifies absence at this order
    bool maybe = false;
    try {
      MatModP Mp(nrows, cols);
      for (std::size_t c = 0; c < cols; ++c)
        for (long k = 0; k < rows_per; ++k)
          for (long dgr = 0; dgr <= numer[c][k].degree(); ++dgr)
            Mp.at((std::size_t)k * (maxdeg + 1) + dgr, c) = F.from_rat(numer[c][k][dgr]);
      maybe = rank_mod_p(std::move(Mp), F) < cols;
    } catch (const BadPrime&) {
      maybe = true;
    }
    if (!maybe) continue;

    std::vector<std::vector<BigRat>> M(nrows, std::vector<BigRat>(cols, BigRat(0)));
    for (std::size_t c = 0; c < cols; ++c)
      for (long k = 0; k < rows_per; ++k)
        for (long dgr = 0; dgr <= numer[c][k].degree(); ++dgr)
          M[(std::size_t)k * (maxdeg + 1) + dgr][c] = numer[c][k][dgr];
    auto basis = exact_nullspace_dense(M, cols);
    for (const auto& v : basis) {
      std::vector<UniPoly> wc(w + 1);
      for (long i = 0; i <= w; ++i) {
        std::vector<BigRat> coeffs(v.begin() + (std::size_t)i * (max_degree + 1),
                                   v.begin() + (std::size_t)(i + 1) * (max_degree + 1));
        wc[i] = UniPoly(std::move(coeffs));
      }
      DiffOp W(std::move(wc));
      W.normalize();
      if (W.is_zero_op()) continue;
      auto check = right_divide(L2 * W, L1);
      if (!check.remainder.is_zero_op()) continue;
      Intertwiner out;
      out.W = W;
      out.cofactor = check.quotient;
      return out;
    }
  }
  return std::nullopt;
}

AdjointVerdict adjoint_homomorphic(const DiffOp& L, long max_order, long max_degree)
{
  AdjointVerdict verdict;
  long worder = max_order < 0 ? std::max<long>(L.order() - 1, 0) : max_order;
  verdict.order_budget = worder;
  verdict.degree_budget = max_degree;
  DiffOp adj = adjoint(L);

  auto direct = intertwiner_search(L, adj, worder, max_degree);
  if (direct) {
    verdict.found = true;
    verdict.twist = UniPoly(BigRat(1));
    verdict.witness = direct;
    return verdict;
  }
  // square-root twists by square-free divisors of the leading coefficient
  RootData rd = rational_roots_with_multiplicity(L.leading());
  std::vector<UniPoly> linear;
  for (const auto& [root, mult] : rd.roots)
    linear.push_back(primitive_part(UniPoly(std::vector<BigRat>{-root, BigRat(1)})));
  std::vector<UniPoly> candidates = linear;
  if (rd.rootless_cofactor.degree() >= 1)
    candidates.push_back(square_free_part(rd.rootless_cofactor));
  UniPoly full = square_free_part(L.leading());
  if (full.degree() >= 1) candidates.push_back(full);
  for (std::size_t a = 0; a < linear.size(); ++a)
    for (std::size_t b = a + 1; b < linear.size(); ++b)
      candidates.push_back(primitive_part(linear[a] * linear[b]));
  std::vector<UniPoly> uniq;
  for (auto& c : candidates) {
    bool seen = false;
    for (const auto& u : uniq)
      if (u == c) seen = true;
    if (!seen && c.degree() >= 1) uniq.push_back(c);
  }
  for (const auto& r : uniq) {
    DiffOp twisted = conjugate_by_power_product(L, {{r, rat(1, 2)}});
    auto found = intertwiner_search(twisted, adj, worder, max_degree);
    if (found) {
      verdict.found = true;
      verdict.twist = r;
      verdict.witness = found;
      return verdict;
    }
  }
  return verdict;
}

// ------------------------------------------------------------- squares ---

namespace {

std::vector<TruncSeries> square_products(const DiffOp& L, bool symmetric, long n_terms,
                                         const BigRat& t0)
{
  DiffOp M = is_zero(t0) ? L : op_translate(L, t0);
  auto basis = ordinary_basis(M, n_terms);
  std::vector<TruncSeries> prods;
  long r = L.order();
  for (long i = 0; i < r; ++i)
    for (long j = symmetric ? i : i + 1; j < r; ++j) {
      if (symmetric)
        prods.push_back(basis[i] * basis[j]);
      else
        prods.push_back(basis[i] * series_derivative(basis[j]) -
                        basis[j] * series_derivative(basis[i]));
    }
  return prods;
}

// dimension of the Q-span of truncated series: modular rank (full rank is a
// proof) plus exact verification of reconstructed dependencies; the prime
// pool grows until the reconstructions stabilize
long span_dimension(const std::vector<TruncSeries>& series, std::size_t prime_count)
{
  std::size_t k = series.size();
  long N = series[0].trunc_order();
  for (const auto& s : series) N = std::min(N, s.trunc_order());

  std::size_t count = std::max<std::size_t>(prime_count, 4);
  for (int round = 0; round < 6; ++round, count *= 2) {
    auto plist = guessing_primes(count);
    std::vector<std::uint64_t> good;
    std::vector<std::vector<std::vector<std::uint64_t>>> bases;
    std::size_t mindim = SIZE_MAX;
    for (auto p : plist) {
      PrimeField F(p);
      MatModP M((std::size_t)N + 1, k);
      try {
        for (std::size_t j = 0; j < k; ++j) {
          auto red = series_mod_p(series[j].truncated(N), F);
          for (long i = 0; i <= N; ++i) M.at(i, j) = red[i];
        }
      } catch (const BadPrime&) {
        continue;
      }
      auto b = nullspace_mod_p(std::move(M), F);
      if (b.empty()) return (long)k; // full rank mod p proves full rank over Q
      mindim = std::min(mindim, b.size());
      bases.push_back(std::move(b));
      good.push_back(p);
    }
    if (good.empty()) throw GuessBudgetExceeded("no usable prime for span dimension");
    std::vector<std::uint64_t> used;
    std::vector<std::vector<std::vector<std::uint64_t>>> kept;
    for (std::size_t i = 0; i < good.size(); ++i)
      if (bases[i].size() == mindim) {
        used.push_back(good[i]);
        kept.push_back(bases[i]);
      }
    BigInt modulus(1);
    for (auto p : used) modulus *= BigInt((unsigned long)p);
    long verified = 0;
    bool all_reconstructed = true;
    for (std::size_t d = 0; d < mindim; ++d) {
      std::vector<BigRat> dep(k);
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        std::vector<std::uint64_t> res;
        for (const auto& b : kept) res.push_back(b[d][j]);
        BigInt x = crt_combine(res, used);
        auto rr = rational_reconstruct(x, modulus);
        if (!rr)
          ok = false;
        else
          dep[j] = *rr;
      }
      if (!ok) {
        all_reconstructed = false;
        continue;
      }
      TruncSeries acc(BigRat(0), N);
      for (std::size_t j = 0; j < k; ++j)
        if (!is_zero(dep[j])) acc = acc + series[j].truncated(N) * dep[j];
      if (acc.is_zero_series())
        ++verified;
      else
        all_reconstructed = false;
    }
    if (all_reconstructed) return (long)k - verified;
    // otherwise retry with a larger prime pool
  }
  throw GuessBudgetExceeded("span dependencies did not reconstruct within the prime budget");
}

SquareResult square_impl(const DiffOp& L, bool symmetric, const SquareConfig& cfg)
{
  long r = L.order();
  SquareResult out;
  out.generic_order = symmetric ? r * (r + 1) / 2 : r * (r - 1) / 2;
  long n_terms = 3 * out.generic_order + cfg.extra_terms;
  BigRat t0 = find_ordinary_point(L);
  auto prods = square_products(L, symmetric, n_terms, t0);
  if (prods.empty()) {
    out.order = 0;
    return out;
  }
  out.order = span_dimension(prods, cfg.primes);
  if (cfg.want_operator) {
    GuessConfig gc;
    gc.max_order = out.order;
    gc.max_degree = cfg.op_max_degree;
    gc.guard_terms = 8;
    long need = (out.order + 1) * (cfg.op_max_degree + 1) + out.order + gc.guard_terms;
    long have = (long)prods.size() * std::max<long>(n_terms - out.order, 0);
    if (have < need) {
      long per = need / (long)prods.size() + out.order + 8;
      prods = square_products(L, symmetric, std::max(n_terms, per), t0);
    }
    auto res = guess_common_min_ode(prods, gc);
    if (res)
      // the products were expanded at t0; move the operator back to t
      out.op = is_zero(t0) ? res->op : op_translate(res->op, -t0);
    else
      throw GuessBudgetExceeded("square operator not found within degree budget");
  }
  return out;
}

} // namespace

SquareResult sym_square(const DiffOp& L, const SquareConfig& cfg)
{
  return square_impl(L, true, cfg);
}

SquareResult ext_square(const DiffOp& L, const SquareConfig& cfg)
{
  if (L.order() == 2) {
    // the Wronskian satisfies a_2 W' + a_1 W = 0 exactly (Abel)
    SquareResult out;
    out.generic_order = 1;
    out.order = 1;
    out.op = DiffOp(std::vector<UniPoly>{L.coeff(1), L.coeff(2)}).normalize();
    return out;
  }
  return square_impl(L, false, cfg);
}

// ---------------------------------------------------- rational solutions --

std::vector<RatFun> rational_solutions(const DiffOp& L, long degree_bound,
                                       int denominator_power)
{
  std::vector<RatFun> out;
  UniPoly S = square_free_part(L.leading());
  long r = L.order();
  for (int e = 0; e <= denominator_power; ++e) {
    if (e > 0 && S.degree() == 0) break;
    // condition L(p / S^e) = 0 cleared by S^{e+r}:
    // sum_i a_i sum_k C(i,k) p^{(i-k)} h_k S^{r-k} = 0,
    // h_0 = 1, h_{k+1} = h_k' S - (e+k) S' h_k
    std::vector<UniPoly> h{UniPoly(BigRat(1))};
    for (long k = 0; k < r; ++k)
      h.push_back(h[k].derivative() * S - BigRat(e + k) * S.derivative() * h[k]);
    std::vector<UniPoly> Spow{UniPoly(BigRat(1))};
    for (long k = 0; k < r; ++k) Spow.push_back(Spow[k] * S);
    std::vector<UniPoly> cols;
    long maxdeg = 0;
    for (long m = 0; m <= degree_bound; ++m) {
      UniPoly p = UniPoly::monomial(BigRat(1), m);
      UniPoly acc;
      for (long i = 0; i <= r; ++i) {
        if (L.coeff(i).is_zero_poly()) continue;
        UniPoly inner;
        for (long k = 0; k <= i; ++k) {
          UniPoly pik = p;
          for (long d = 0; d < i - k; ++d) pik = pik.derivative();
          if (pik.is_zero_poly()) continue;
          inner += BigRat(binomial((unsigned long)i, (unsigned long)k)) * pik * h[k] *
                   Spow[r - k];
        }
        acc += L.coeff(i) * inner;
      }
      maxdeg = std::max(maxdeg, acc.degree());
      cols.push_back(acc);
    }
    std::vector<std::vector<BigRat>> M(maxdeg + 1,
                                       std::vector<BigRat>(degree_bound + 1, BigRat(0)));
    for (long m = 0; m <= degree_bound; ++m)
      for (long d = 0; d <= cols[m].degree(); ++d) M[d][m] = cols[m][d];
    auto basis = exact_nullspace_dense(M, degree_bound + 1);
    for (const auto& v : basis) {
      UniPoly p(std::vector<BigRat>(v.begin(), v.end()));
      if (p.is_zero_poly()) continue;
      p = primitive_part(p);
      UniPoly Se(BigRat(1));
      for (int d = 0; d < e; ++d) Se = Se * S;
      RatFun sol(p, Se);
      bool dup = false;
      for (const auto& s : out)
        if (s == sol) dup = true;
      if (!dup) out.push_back(sol);
    }
  }
  return out;
}

// ------------------------------------------------------------ signature --

GaloisSignature galois_signature(const DiffOp& L, const SquareConfig& cfg)
{
  GaloisSignature sig;
  long r = L.order();
  SquareConfig c = cfg;
  c.want_operator = false;

  auto ext = ext_square(L, c);
  sig.ext2_order = ext.order;
  if (r >= 3 && ext.order < ext.generic_order) {
    sig.kind = GaloisSignature::SymplecticSignature;
    sig.evidence = "ext^2 order " + std::to_string(ext.order) + " < generic " +
                   std::to_string(ext.generic_order);
    return sig;
  }
  auto sym = sym_square(L, c);
  sig.sym2_order = sym.order;
  if (sym.order < sym.generic_order) {
    sig.kind = GaloisSignature::OrthogonalSignature;
    sig.evidence = "sym^2 order " + std::to_string(sym.order) + " < generic " +
                   std::to_string(sym.generic_order);
    return sig;
  }
  if (r == 2) {
    auto rs = rational_solutions(*ext.op, 24, 2);
    if (!rs.empty()) {
      sig.kind = GaloisSignature::SymplecticSignature;
      sig.evidence = "ext^2 (Wronskian) has the rational solution " + rs.front().to_string();
    } else {
      sig.kind = GaloisSignature::SymplecticSignature;
      sig.evidence = "order 2: Sp(2) = SL(2) classification";
    }
    return sig;
  }
  SquareConfig cop = cfg;
  cop.want_operator = true;
  try {
    auto sym_op = sym_square(L, cop);
    if (sym_op.op) {
      auto rs = rational_solutions(*sym_op.op, 32, 2);
      if (!rs.empty()) {
        sig.kind = GaloisSignature::OrthogonalSignature;
        sig.evidence = "sym^2 has the rational solution " + rs.front().to_string();
        return sig;
      }
    }
    auto ext_op = ext_square(L, cop);
    if (ext_op.op) {
      auto rs = rational_solutions(*ext_op.op, 32, 2);
      if (!rs.empty()) {
        sig.kind = GaloisSignature::SymplecticSignature;
        sig.evidence = "ext^2 has the rational solution " + rs.front().to_string();
        return sig;
      }
    }
  } catch (const GuessBudgetExceeded&) {
  }
  sig.kind = GaloisSignature::NoSignatureFound;
  sig.evidence = "no order drop and no rational solution within budget";
  return sig;
}

// ----------------------------------------------------------- p-curvature --

namespace {

using PolyP = std::vector<std::uint64_t>;

PolyP poly_trim(PolyP a)
{
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

PolyP poly_add(const PolyP& a, const PolyP& b, const PrimeField& F)
{
  PolyP r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  return poly_trim(std::move(r));
}

PolyP poly_mul(const PolyP& a, const PolyP& b, const PrimeField& F)
{
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  return poly_trim(std::move(r));
}

PolyP poly_deriv(const PolyP& a, const PrimeField& F)
{
  if (a.size() <= 1) return {};
  PolyP r(a.size() - 1, 0);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], i % F.p());
  return poly_trim(std::move(r));
}

PolyP poly_scale(const PolyP& a, std::uint64_t s, const PrimeField& F)
{
  PolyP r = a;
  for (auto& x : r) x = F.mul(x, s);
  return poly_trim(std::move(r));
}

PolyP reduce_poly(const UniPoly& p, const PrimeField& F)
{
  PolyP r(p.degree() + 1, 0);
  for (long i = 0; i <= p.degree(); ++i) r[i] = F.from_rat(p[i]);
  return poly_trim(std::move(r));
}

} // namespace

bool p_curvature_is_zero(const DiffOp& L, std::uint64_t p)
{
  if (p < 3) throw BadPrime("p must be an odd prime");
  PrimeField F(p);
  long r = L.order();
  PolyP d = reduce_poly(L.leading(), F);
  if (d.empty()) throw BadPrime("p divides the leading coefficient");
  // A = N1/d: companion matrix; iterate N_{k+1} = N_k' d - k N_k d' + N_k N_1
  std::vector<std::vector<PolyP>> N1(r, std::vector<PolyP>(r));
  for (long i = 0; i + 1 < r; ++i) N1[i][i + 1] = d;
  for (long j = 0; j < r; ++j)
    N1[r - 1][j] = poly_scale(reduce_poly(L.coeff(j), F), F.p() - 1, F);
  std::vector<std::vector<PolyP>> Nk = N1;
  PolyP dprime = poly_deriv(d, F);
  for (std::uint64_t k = 1; k < p; ++k) {
    std::vector<std::vector<PolyP>> next(r, std::vector<PolyP>(r));
    std::uint64_t kk = k % p;
    std::uint64_t negk = kk == 0 ? 0 : F.p() - kk;
    for (long i = 0; i < r; ++i)
      for (long j = 0; j < r; ++j) {
        PolyP term = poly_mul(poly_deriv(Nk[i][j], F), d, F);
        term = poly_add(term, poly_scale(poly_mul(Nk[i][j], dprime, F), negk, F), F);
        PolyP t3;
        for (long m = 0; m < r; ++m)
          t3 = poly_add(t3, poly_mul(Nk[i][m], N1[m][j], F), F);
        next[i][j] = poly_add(term, t3, F);
      }
    Nk = std::move(next);
  }
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < r; ++j)
      if (!Nk[i][j].empty()) return false;
  return true;
}

} // namespace diag
