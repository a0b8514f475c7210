#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diagonals/diagonal.hpp>
#include <diagonals/oracle.hpp>

using namespace diag;

TEST_CASE("fcc constant-term oracle agrees with the brute-force diagonal")
{
  // d = 2: 1 - x1 x2 x3 (x1+1/x1)(x2+1/x2)
  QExpr q2 = parse("1/(1 - x*y*w*((x+1/x)*(y+1/y)))");
  TruncSeries d2 = diagonal(q2, 7, DiagEngine::BruteForce);
  auto o2 = fcc_ct_prefix(2, 7);
  for (long p = 0; p < 7; ++p) CHECK(d2[p] == o2[p]);

  // d = 3: series starts 1 + 12t^2 + 48t^3 + 540t^4
  QExpr q3 = parse("1/(1 - x*y*z*u*((x+1/x)*(y+1/y)+(x+1/x)*(z+1/z)+(y+1/y)*(z+1/z)))");
  TruncSeries d3 = diagonal(q3, 6, DiagEngine::BruteForce);
  auto o3 = fcc_ct_prefix(3, 6);
  for (long p = 0; p < 6; ++p) CHECK(d3[p] == o3[p]);
  CHECK(o3[0] == 1);
  CHECK(is_zero(o3[1]));
  CHECK(o3[2] == 12);
  CHECK(o3[3] == 48);
  CHECK(o3[4] == 540);

  // the 3F2 pullback form: sum (3n)!(2n)!/n!^5 t^{2n} (1+4t)^n
  long N = 12;
  auto o3b = fcc_ct_prefix(3, N);
  std::vector<BigRat> expect(N, BigRat(0));
  for (long n = 0; 2 * n < N; ++n) {
    BigRat c = BigRat(factorial(3 * (unsigned long)n) * factorial(2 * (unsigned long)n));
    c /= BigRat(int_pow(factorial((unsigned long)n), 5));
    for (long j = 0; j <= n && 2 * n + j < N; ++j)
      expect[2 * n + j] += c * BigRat(binomial((unsigned long)n, (unsigned long)j)) *
                           rat_pow(BigRat(4), j);
  }
  for (long p = 0; p < N; ++p) CHECK(o3b[p] == expect[p]);
}

TEST_CASE("Guttmann structure-function oracle (deflated even series)")
{
  auto g = guttmann_e3_prefix(4);
  CHECK(g[0] == 1);
  CHECK(g[1] == 32); // 4 triples, CT[prod^2] = 8 each

  // brute-force cross-check on the 5-variable Laurent polynomial: the raw
  // diagonal is even and its nonzero coefficients are the deflated sequence
  QExpr q = parse(
      "1/(1 - a*b*c*d*w*((a+1/a)*(b+1/b)*(c+1/c)+(a+1/a)*(b+1/b)*(d+1/d)"
      "+(a+1/a)*(c+1/c)*(d+1/d)+(b+1/b)*(c+1/c)*(d+1/d)))");
  TruncSeries d = diagonal(q, 6, DiagEngine::BruteForce);
  CHECK(series_subsequence(d, 2) == TruncSeries(std::vector<BigRat>(g.begin(), g.begin() + 3)));
  CHECK(is_zero(d[1]));
  CHECK(is_zero(d[3]));
}

TEST_CASE("sc and diamond oracles")
{
  // sc d = 3 is the Heun series 1 + 6t + 90t^2 + 1860t^3 + 44730t^4
  auto sc3 = sc_lgf_prefix(3, 6);
  CHECK(sc3[0] == 1);
  CHECK(sc3[1] == 6);
  CHECK(sc3[2] == 90);
  CHECK(sc3[3] == 1860);
  CHECK(sc3[4] == 44730);
  CHECK(sc3[5] == 1172556);

  QExpr q = parse("1/(1 - (x + y + z + u*(x*y + x*z + y*z)))");
  TruncSeries d = diagonal(q, 6, DiagEngine::Fast);
  for (long p = 0; p < 6; ++p) CHECK(d[p] == sc3[p]);

  // diamond d = 3: multinomial squares on 4 indices
  auto dia = diamond_lgf_prefix(3, 5);
  CHECK(dia[0] == 1);
  CHECK(dia[1] == 4);
  CHECK(dia[2] == 28);
  CHECK(dia[3] == 256);
  CHECK(dia[4] == 2716);
}

TEST_CASE("b-sweep oracle matches the closed form and the engine")
{
  for (long bv : {0L, 1L, 2L, 5L}) {
    BigRat b(bv);
    auto o = b_sweep_prefix(b, 4);
    CHECK(o[0] == 1);
    CHECK(o[1] == BigRat(20) * (b + 2));
    CHECK(o[2] == BigRat(756) * (b * b + BigRat(3) * b + 6));
    CHECK(o[3] == BigRat(34320) * (b * b * b + BigRat(4) * b * b + BigRat(10) * b + 20));
  }
  // engine cross-check at b = 2
  QExpr q = substitute_param("param b : 1/((1 - x - y - z - u)*(1 - x - y - b*z))",
                             {{"b", BigRat(2)}});
  TruncSeries d = diagonal(q, 5, DiagEngine::Fast);
  auto o = b_sweep_prefix(BigRat(2), 5);
  for (long p = 0; p < 5; ++p) CHECK(d[p] == o[p]);
}

TEST_CASE("oracle interface")
{
  auto cy2 = CoefficientOracle::from_term("sum[n] (10n)!/(n!^3*(2n)!*(5n)!)");
  CHECK(oracle_eval(cy2, 0) == 1);
  CHECK(oracle_eval(cy2, 1) == 15120);

  auto apery = CoefficientOracle::from_term("sum[n,k] C(n,k)^3*C(n+k,k)^3");
  CHECK(oracle_eval(apery, 1) == 9);
  CHECK(oracle_eval(apery, 2) == 433);
  CHECK(oracle_eval(apery, 3) == 36729);

  auto fcc4 = CoefficientOracle::native("fcc_ct", {{"d", BigRat(4)}});
  auto pre = oracle_prefix(fcc4, 4);
  CHECK(pre[2] == 24);
  CHECK(pre[3] == 192);
}
