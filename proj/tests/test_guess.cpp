#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diagonals/guess.hpp>

using namespace diag;

namespace {

TruncSeries central_binomials(long n)
{
  std::vector<BigRat> c(n + 1);
  for (long i = 0; i <= n; ++i) c[i] = BigRat(binomial(2 * (unsigned long)i, (unsigned long)i));
  return TruncSeries(std::move(c));
}

TruncSeries geometric(long n)
{
  return TruncSeries(std::vector<BigRat>(n + 1, BigRat(1)));
}

TruncSeries franel(long n) // sum_k C(n,k)^3
{
  std::vector<BigRat> c(n + 1);
  for (long i = 0; i <= n; ++i) {
    BigInt acc(0);
    for (long k = 0; k <= i; ++k) {
      BigInt b = binomial((unsigned long)i, (unsigned long)k);
      acc += b * b * b;
    }
    c[i] = BigRat(acc);
  }
  return TruncSeries(std::move(c));
}

} // namespace

TEST_CASE("guess order-1 operator for central binomials")
{
  GuessConfig cfg;
  auto res = guess_min_ode(central_binomials(30), cfg);
  REQUIRE(res.has_value());
  CHECK(res->order == 1);
  CHECK(res->degree == 1);
  // (1-4t) D - 2
  DiffOp expect(std::vector<UniPoly>{UniPoly(BigRat(-2)),
                                     UniPoly(std::vector<BigRat>{BigRat(1), BigRat(-4)})});
  CHECK(res->op == expect.normalize());
  CHECK(apply_op(res->op, central_binomials(30)).is_zero_series());
}

TEST_CASE("guess geometric series")
{
  GuessConfig cfg;
  auto res = guess_min_ode(geometric(25), cfg);
  REQUIRE(res.has_value());
  CHECK(res->order == 1);
  // (1-t) D - 1
  DiffOp expect(std::vector<UniPoly>{UniPoly(BigRat(-1)),
                                     UniPoly(std::vector<BigRat>{BigRat(1), BigRat(-1)})});
  CHECK(res->op == expect.normalize());
}

TEST_CASE("guess Franel: order 2")
{
  GuessConfig cfg;
  auto res = guess_min_ode(franel(40), cfg);
  REQUIRE(res.has_value());
  CHECK(res->order == 2);
  CHECK(apply_op(res->op, franel(40)).is_zero_series());
  CHECK(min_order_certificate(franel(40), res->op, cfg));
}

TEST_CASE("guess_mod_p agrees with exact result")
{
  GuessConfig cfg;
  TruncSeries s = central_binomials(30);
  auto exact = guess_min_ode(s, cfg);
  REQUIRE(exact.has_value());
  auto primes = guessing_primes(3);
  for (auto p : primes) {
    PrimeField F(p);
    auto mod = guess_mod_p(series_mod_p(s, F), p, cfg);
    REQUIRE(mod.has_value());
    CHECK(mod->order == exact->order);
    // exact operator reduced mod p equals the modular image up to scalar
    std::uint64_t scale = 0;
    bool consistent = true;
    for (long i = 0; i <= exact->order && consistent; ++i)
      for (long j = 0; j <= exact->degree && consistent; ++j) {
        std::uint64_t e = F.from_rat(exact->op.coeff(i)[j]);
        std::uint64_t g = (long)j < (long)mod->coeffs[i].size() ? mod->coeffs[i][j] : 0;
        if (e == 0 && g == 0) continue;
        if (e == 0 || g == 0) { consistent = false; break; }
        std::uint64_t ratio = F.mul(e, F.inv(g));
        if (scale == 0)
          scale = ratio;
        else if (scale != ratio)
          consistent = false;
      }
    CHECK(consistent);
  }
}

TEST_CASE("modular path: BadPrime on denominator collision")
{
  // series with p in coefficient denominators
  auto primes = guessing_primes(1);
  PrimeField F(primes[0]);
  std::vector<BigRat> c{BigRat(1), BigRat(1) / BigRat((unsigned long)primes[0]), BigRat(1)};
  CHECK_THROWS_AS(series_mod_p(TruncSeries(std::move(c)), F), BadPrime);
}

TEST_CASE("min_order_certificate rejects padded operators")
{
  GuessConfig cfg;
  TruncSeries g = geometric(30);
  auto res = guess_min_ode(g, cfg);
  REQUIRE(res.has_value());
  CHECK(min_order_certificate(g, res->op, cfg));

  // deliberately non-minimal D*L still annihilates, but is not minimal
  DiffOp DL = DiffOp::derivation() * res->op;
  CHECK(apply_op(DL, g).is_zero_series());
  CHECK_FALSE(min_order_certificate(g, DL, cfg));
}

TEST_CASE("insufficient terms reported")
{
  GuessConfig cfg;
  cfg.guard_terms = 8;
  CHECK_THROWS_AS(guess_min_ode(TruncSeries(BigRat(1), 4), cfg), InsufficientTerms);
}

TEST_CASE("common annihilator of two series")
{
  GuessConfig cfg;
  // 1/(1-t) and 1/(1-2t) are both annihilated by an order-2 operator;
  // neither is annihilated by the other's order-1 operator
  long N = 30;
  std::vector<BigRat> a(N + 1), b(N + 1);
  BigRat pw(1);
  for (long i = 0; i <= N; ++i) {
    a[i] = 1;
    b[i] = pw;
    pw *= 2;
  }
  auto res = guess_common_min_ode({TruncSeries(std::move(a)), TruncSeries(std::move(b))}, cfg);
  REQUIRE(res.has_value());
  CHECK(res->order == 2);
}
