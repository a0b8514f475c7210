#include <diagonals/calabi_yau.hpp>

#include <algorithm>

namespace diag {

MumQuadruple mum_quadruple(const DiffOp& L, long n_terms)
{
  if (!is_MUM(L)) throw NotMUM();
  FrobeniusBasis b = frobenius_basis(L, AnalysisPoint::origin(), n_terms);
  assert(b.groups.size() == 1);
  const auto& group = b.groups[0];
  const LogSeries& top = group.back();
  MumQuadruple q;
  q.depth = (int)top.layers.size() - 1;
  long N = n_terms;
  auto layer = [&](int from_top) -> TruncSeries {
    int idx = q.depth - from_top;
    if (idx < 0) return TruncSeries(BigRat(0), N);
    return top.layers[idx].truncated(N);
  };
  q.S0 = layer(0);
  q.S10 = layer(1);
  q.S20 = layer(2);
  q.S30 = layer(3);
  return q;
}

TruncSeries nome(const DiffOp& L, long n_terms)
{
  // one extra term so thatexp/ratio truncation still yields n_terms of q
  MumQuadruple q = mum_quadruple(L, n_terms);
  TruncSeries ratio = series_div(q.S10, q.S0);
  TruncSeries e = series_exp(ratio);
  return series_shift_mul(TruncSeries(e.coeffs()), 1).truncated(n_terms);
}

TruncSeries mirror_map(const DiffOp& L, long n_terms)
{
  return series_reverse(nome(L, n_terms));
}

TruncSeries yukawa(const DiffOp& L, long n_terms)
{
  MumQuadruple q = mum_quadruple(L, n_terms + 1);
  if (q.depth < 2) throw NotMUM();
  // S2/S0 = z^2/2 + (v - u^2/2) with u = S10/S0, v = S20/S0, z = ln q;
  // K = 1 + theta_q^2 of (v - u^2/2) recomposed in q
  TruncSeries u = series_div(q.S10, q.S0);
  TruncSeries v = series_div(q.S20, q.S0);
  TruncSeries g = v - (u * u) * rat(1, 2);
  TruncSeries tq = series_reverse(series_shift_mul(series_exp(u), 1).truncated(n_terms + 1));
  TruncSeries gq = series_compose(g, tq);
  TruncSeries K = series_theta(series_theta(gq));
  std::vector<BigRat> c(K.coeffs());
  c[0] += 1;
  return TruncSeries(std::move(c)).truncated(n_terms);
}

std::vector<BigRat> instanton_numbers(const TruncSeries& K, long count,
                                      std::optional<long> n0)
{
  assert(K[0] == 1);
  std::vector<BigRat> n(count + 1, BigRat(0));
  for (long m = 1; m <= count && m <= K.trunc_order(); ++m) {
    BigRat acc = K[m];
    for (long j = 1; j < m; ++j)
      if (m % j == 0) acc -= n[j] * BigRat(j) * BigRat(j) * BigRat(j);
    n[m] = acc / (BigRat(m) * BigRat(m) * BigRat(m));
  }
  std::vector<BigRat> out(n.begin() + 1, n.end());
  if (n0)
    for (const auto& x : out)
      if (!is_integer(x * BigRat(*n0)))
        throw std::runtime_error("instanton numbers not integral at the given n0");
  return out;
}

namespace {

bool integral_series(const TruncSeries& s)
{
  for (long i = 0; i <= s.trunc_order(); ++i)
    if (!is_integer(s[i])) return false;
  return true;
}

} // namespace

CYReport cy_check(const DiffOp& L, long n_terms)
{
  CYReport rep;
  rep.mum = is_MUM(L);
  if (!rep.mum) {
    rep.notes = "not MUM at the origin";
    return rep;
  }
  try {
    IndicialData inf = indicial(L, AnalysisPoint::infinity());
    for (const auto& [root, mult] : inf.rational_roots)
      for (int k = 0; k < mult; ++k) rep.infinity_exponents.push_back(root);
    std::sort(rep.infinity_exponents.begin(), rep.infinity_exponents.end());
    std::size_t m = rep.infinity_exponents.size();
    if (m == (std::size_t)L.order() && m >= 2) {
      rep.exponent_pairing = true;
      BigRat sum = rep.infinity_exponents.front() + rep.infinity_exponents.back();
      for (std::size_t i = 0; i < m / 2; ++i)
        if (rep.infinity_exponents[i] + rep.infinity_exponents[m - 1 - i] != sum)
          rep.exponent_pairing = false;
    }
  } catch (const IrregularSingularity&) {
    rep.exponent_pairing = false;
    rep.notes += "irregular at infinity; ";
  }

  MumQuadruple q = mum_quadruple(L, n_terms);
  rep.s0_integral = integral_series(q.S0);
  TruncSeries qn = nome(L, n_terms);
  rep.nome_integral = integral_series(qn);
  rep.mirror_integral = integral_series(series_reverse(qn));
  TruncSeries K = yukawa(L, n_terms);
  rep.yukawa_integral = integral_series(K);
  rep.instantons = instanton_numbers(K, std::min<long>(n_terms - 1, K.trunc_order()));
  BigInt lcm(1);
  for (const auto& x : rep.instantons)
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  rep.n0 = lcm.fits_slong_p() ? lcm.get_si() : -1;
  rep.instantons_integral = rep.n0 >= 1;
  rep.all_pass = rep.mum && rep.exponent_pairing && rep.s0_integral && rep.nome_integral &&
                 rep.mirror_integral && rep.yukawa_integral && rep.instantons_integral;
  return rep;
}

bool check_ext2_relation(const DiffOp& L5, const DiffOp& L4, long n_terms)
{
  BigRat t0 = find_ordinary_point(L4);
  DiffOp M4 = is_zero(t0) ? L4 : op_translate(L4, t0);
  DiffOp M5 = is_zero(t0) ? L5 : op_translate(L5, t0);
  auto basis = ordinary_basis(M4, n_terms);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      TruncSeries w = basis[i] * series_derivative(basis[j]) -
                      basis[j] * series_derivative(basis[i]);
      if (!apply_op(M5, w).is_zero_series()) return false;
    }
  return true;
}

} // namespace diag
