#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diagonals/series.hpp>

#include <random>

using namespace diag;

namespace {

TruncSeries geometric(long n) // 1/(1-t)
{
  std::vector<BigRat> c(n + 1, BigRat(1));
  return TruncSeries(std::move(c));
}

TruncSeries random_series(std::mt19937& rng, long n, bool unit_constant)
{
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  std::vector<BigRat> c(n + 1);
  for (long i = 0; i <= n; ++i) c[i] = rat(num(rng), den(rng));
  if (unit_constant) c[0] = 1;
  return TruncSeries(std::move(c));
}

} // namespace

TEST_CASE("series_inverse basics")
{
  // 1 - t -> geometric series
  TruncSeries s(std::vector<BigRat>{BigRat(1), BigRat(-1), BigRat(0), BigRat(0)});
  CHECK(series_inverse(s) == geometric(3));

  // identity
  TruncSeries one(BigRat(1), 4);
  CHECK(series_inverse(one) == one);

  // 1 - 4t with 3 known coefficients: multiply back and check == 1
  TruncSeries f(std::vector<BigRat>{BigRat(1), BigRat(-4), BigRat(0)});
  TruncSeries inv = series_inverse(f);
  CHECK(inv[0] == 1);
  CHECK(inv[1] == 4);
  CHECK(inv[2] == 16);
  TruncSeries prod = inv * f;
  CHECK(prod[0] == 1);
  CHECK(is_zero(prod[1]));
  CHECK(is_zero(prod[2]));

  CHECK_THROWS_AS(series_inverse(TruncSeries(BigRat(0), 3)), ZeroConstantTerm);
}

TEST_CASE("series_inverse on random inputs multiplies back to 1")
{
  std::mt19937 rng(7);
  for (int it = 0; it < 20; ++it) {
    TruncSeries s = random_series(rng, 12, false);
    if (is_zero(s[0])) continue;
    TruncSeries p = s * series_inverse(s);
    CHECK(p[0] == 1);
    for (long i = 1; i <= p.trunc_order(); ++i) CHECK(is_zero(p[i]));
  }
}

TEST_CASE("exp and log")
{
  CHECK(series_exp(TruncSeries(BigRat(0), 5)) == TruncSeries(BigRat(1), 5));

  // log(1 + t) = t - t^2/2 + t^3/3 (Mercator)
  TruncSeries s(std::vector<BigRat>{BigRat(1), BigRat(1), BigRat(0), BigRat(0)});
  TruncSeries l = series_log(s);
  CHECK(l[1] == 1);
  CHECK(l[2] == rat(-1, 2));
  CHECK(l[3] == rat(1, 3));

  CHECK_THROWS_AS(series_exp(TruncSeries(BigRat(1), 3)), BadConstantTerm);
  CHECK_THROWS_AS(series_log(TruncSeries(BigRat(2), 3)), BadConstantTerm);

  std::mt19937 rng(11);
  for (int it = 0; it < 10; ++it) {
    TruncSeries a = random_series(rng, 10, true);
    CHECK(series_exp(series_log(a)) == a);
    std::vector<BigRat> z(a.coeffs());
    z[0] = 0;
    TruncSeries b(std::move(z));
    CHECK(series_log(series_exp(b)) == b);
  }
}

TEST_CASE("series_compose")
{
  std::mt19937 rng(13);
  TruncSeries s = random_series(rng, 9, false);
  std::vector<BigRat> sz(s.coeffs());
  sz[0] = 0;
  TruncSeries inner(std::move(sz));
  CHECK(series_compose(TruncSeries::identity(9), inner) == inner);

  // compose(1/(1-t), t^2) = 1 + t^2 + t^4
  TruncSeries t2(BigRat(0), 5);
  t2.set_coeff(2, BigRat(1));
  TruncSeries comp = series_compose(geometric(5), t2);
  CHECK(comp[0] == 1);
  CHECK(is_zero(comp[1]));
  CHECK(comp[2] == 1);
  CHECK(is_zero(comp[3]));
  CHECK(comp[4] == 1);

  CHECK_THROWS_AS(series_compose(geometric(4), TruncSeries(BigRat(1), 4)), InnerConstantNonzero);
}

TEST_CASE("series_reverse")
{
  CHECK(series_reverse(TruncSeries::identity(6)) == TruncSeries::identity(6));

  // reverse(t + t^2) = t - t^2 + 2t^3 - 5t^4 (Catalan signs); checked by
  // substituting back
  TruncSeries s(BigRat(0), 6);
  s.set_coeff(1, BigRat(1));
  s.set_coeff(2, BigRat(1));
  TruncSeries g = series_reverse(s);
  CHECK(g[1] == 1);
  CHECK(g[2] == -1);
  CHECK(g[3] == 2);
  CHECK(g[4] == -5);
  TruncSeries check = series_compose(s, g);
  CHECK(check == TruncSeries::identity(6));

  CHECK_THROWS_AS(series_reverse(TruncSeries(BigRat(1), 4)), NotReversible);

  std::mt19937 rng(17);
  for (int it = 0; it < 10; ++it) {
    TruncSeries a = random_series(rng, 10, false);
    std::vector<BigRat> c(a.coeffs());
    c[0] = 0;
    if (is_zero(c[1])) c[1] = 1;
    TruncSeries b(std::move(c));
    // reverse is an involution on its domain
    CHECK(series_reverse(series_reverse(b)) == b);
  }
}

TEST_CASE("series_pow_rational")
{
  // (1 - 4t)^(-1/2) = sum C(2n,n) t^n
  TruncSeries s(std::vector<BigRat>{BigRat(1), BigRat(-4), BigRat(0), BigRat(0)});
  TruncSeries p = series_pow_rational(s, rat(-1, 2));
  CHECK(p[0] == 1);
  CHECK(p[1] == 2);
  CHECK(p[2] == 6);
  CHECK(p[3] == 20);
  // cross-check by squaring: p^2 = 1/(1-4t)
  TruncSeries sq = p * p;
  CHECK(sq == series_inverse(s));

  CHECK(series_pow_rational(p, BigRat(0)) == TruncSeries(BigRat(1), 3));

  // involution: ((1 - 1728t)^(1/2))^2 = 1 - 1728t
  TruncSeries m(std::vector<BigRat>{BigRat(1), BigRat(-1728), BigRat(0), BigRat(0), BigRat(0)});
  TruncSeries h = series_pow_rational(m, rat(1, 2));
  CHECK(h * h == m);

  // additivity of exponents on random input
  std::mt19937 rng(23);
  TruncSeries a = random_series(rng, 8, true);
  TruncSeries x = series_pow_rational(a, rat(2, 3));
  TruncSeries y = series_pow_rational(a, rat(-1, 6));
  TruncSeries z = series_pow_rational(a, rat(1, 2));
  CHECK(x * y == z);

  // integer power agrees with repeated multiplication
  TruncSeries cube = series_pow_rational(a, BigRat(3));
  CHECK(cube == a * a * a);

  CHECK_THROWS_AS(series_pow_rational(TruncSeries(BigRat(2), 3), rat(1, 2)), BadConstantTerm);
}

TEST_CASE("series_subsequence")
{
  // subsequence(1 + 15120 t^6 + 3491888400 t^12, 6)
  TruncSeries s(BigRat(0), 12);
  s.set_coeff(0, BigRat(1));
  s.set_coeff(6, BigRat(15120));
  s.set_coeff(12, rat_from_string("3491888400"));
  TruncSeries sub = series_subsequence(s, 6);
  CHECK(sub[0] == 1);
  CHECK(sub[1] == 15120);
  CHECK(sub[2] == rat_from_string("3491888400"));

  TruncSeries g = geometric(9);
  CHECK(series_subsequence(g, 1) == g);
  TruncSeries s3 = series_subsequence(g, 3);
  CHECK(s3.trunc_order() == 3);
  CHECK(s3[0] == 1);
  CHECK(s3[1] == 1);
  CHECK(s3[2] == 1);
}

TEST_CASE("all results stay in reduced form")
{
  std::mt19937 rng(29);
  TruncSeries a = random_series(rng, 8, true);
  for (const auto& op : {series_pow_rational(a, rat(5, 3)), series_inverse(a), series_log(a)})
    for (const auto& c : op.coeffs()) {
      BigInt g;
      mpz_gcd(g.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
      CHECK((g == 1 || (is_zero(c) && c.get_den() == 1)));
      CHECK(c.get_den() > 0);
    }
}
