#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diagonals/diagonal.hpp>
#include <diagonals/qexpr.hpp>

using namespace diag;

TEST_CASE("parse 1/(1-x-y)")
{
  QExpr q = parse("1/(1 - x - y)");
  CHECK(q.variables == std::vector<std::string>{"x", "y"});
  REQUIRE(q.factors.size() == 1);
  CHECK(q.factors[0].second == -1);
  CHECK(q.factors[0].first.constant == 1);
  CHECK(q.factors[0].first.monomials.size() == 2);
  CHECK(q.numerator.constant == 1);
  CHECK(q.numerator.monomials.empty());
  CHECK(q.diag_all());
}

TEST_CASE("parse the root-variable quintic polynomial")
{
  QExpr q = parse("1/(1 - (x + y + z + u^(1/2) + v^(1/5)))");
  REQUIRE(q.factors.size() == 1);
  const auto& g = q.factors[0].first;
  CHECK(g.monomials.size() == 5);
  bool half = false, fifth = false;
  for (const auto& m : g.monomials)
    for (const auto& e : m.exponents) {
      if (e == rat(1, 2)) half = true;
      if (e == rat(1, 5)) fifth = true;
    }
  CHECK(half);
  CHECK(fifth);
}

TEST_CASE("parse Laurent fcc polynomial: 12 monomials, exponents >= 0")
{
  QExpr q = parse("1/(1 - x*y*z*u*((x+1/x)*(y+1/y)+(x+1/x)*(z+1/z)+(y+1/y)*(z+1/z)))");
  REQUIRE(q.factors.size() == 1);
  const auto& g = q.factors[0].first;
  CHECK(g.monomials.size() == 12);
  for (const auto& m : g.monomials)
    for (const auto& e : m.exponents) CHECK(sgn(e) >= 0);
}

TEST_CASE("parse errors")
{
  CHECK_THROWS_AS(parse("1/(2 - x - y)"), NonUnitConstantTerm);
  CHECK_THROWS_AS(parse("1/(1 - x/y)"), NegativeExponentAfterNormalize);
  CHECK_THROWS_AS(parse("1/(1 - x -"), SyntaxError);
  CHECK_THROWS_AS(parse("param b : 1/(1 - x - b*y)"), UnboundParameter);
}

TEST_CASE("substitute_param on the b-sweep template")
{
  std::string templ = "param alpha : 1/(1 - (x + y + alpha*z + x*y))";
  QExpr q0 = substitute_param(templ, {{"alpha", BigRat(0)}});
  REQUIRE(q0.factors.size() == 1);
  // alpha = 0 zeroes the z monomial; 3 monomials remain
  CHECK(q0.factors[0].first.monomials.size() == 3);

  QExpr q2 = substitute_param(templ, {{"alpha", BigRat(2)}});
  CHECK(q2.factors[0].first.monomials.size() == 4);
  bool saw2 = false;
  for (const auto& m : q2.factors[0].first.monomials)
    if (m.coeff.is_constant() && m.coeff.constant_part() == -2) saw2 = true;
  CHECK(saw2);
}

TEST_CASE("round trip parse(print(q)) == q")
{
  for (const char* text : {
           "1/(1 - x - y)",
           "1/(1 - (x + y + z + u^(1/2) + v^(1/5)))",
           "(1 + x)/(1 - x - y*z - z^2 + x*y)",
           "1/((1 - (x+y+z))*(1 - y - z^2))",
           "(1 - x - y)^(1/3)/(1 - x - y - z)",
           "diag[x,y] of 1/(1 - x - y - u*x)",
           "1/(1 - x - y/(1 - 4*t) - z)",
       }) {
    QExpr q = parse(text);
    QExpr q2 = parse(print(q));
    CHECK(q2 == q);
  }
}

TEST_CASE("normalization is idempotent")
{
  QExpr q = parse("1/(1 - x - y - x - y + x)"); // merges to 1 - x - 2y
  REQUIRE(q.factors.size() == 1);
  CHECK(q.factors[0].first.monomials.size() == 2);
  QExpr q2 = parse(print(q));
  CHECK(q2 == q);
}

TEST_CASE("series-valued coefficient in a factor monomial")
{
  // q128 of Remark 5.2 carries y/(1-4t)
  QExpr q = parse("1/(1 - (z+u+v) - x - y/(1-4*t))");
  REQUIRE(q.factors.size() == 1);
  bool has_series = false;
  for (const auto& m : q.factors[0].first.monomials)
    if (!m.coeff.is_constant()) has_series = true;
  CHECK(has_series);
}

TEST_CASE("golden monomial counts for the encoded catalog polynomials")
{
  struct Row {
    const char* text;
    std::size_t monomials;
  } rows[] = {
      {"1/(1 - (x + y + z + u + v))", 5},
      {"1/(1 - (x + y + z + u^(1/2) + v^(1/5)))", 5},
      {"1/(1 - (x + z)*(1 + y)*(1 + u)*(1 + v))", 16},
      {"1/(1 - (x + y + z + u + v^(1/4)))", 5},
      {"1/(1 - (x + y + z + u + v*(x*y*z + x*y*u + x*z*u + y*z*u)))", 8},
      {"1/(1 - (x + y + z + u*(x*y + x*z + y*z)))", 6},
  };
  for (const auto& r : rows) {
    QExpr q = parse(r.text);
    REQUIRE(q.factors.size() == 1);
    CHECK(q.factors[0].first.monomials.size() == r.monomials);
  }
}

TEST_CASE("effective variable reduction: invisible monomial then pair merge")
{
  // 1 - x^2 - y - xz is equivalent to 1 - x - y
  QExpr q = parse("1/(1 - x^2 - y - x*z)");
  auto rep = effective_variable_reduction(q);
  CHECK(rep.changed);
  CHECK(rep.reduced.n_vars() == 2);
  CHECK(rep.reduced.factors[0].first.monomials.size() == 2);
  for (const auto& m : rep.reduced.factors[0].first.monomials) {
    BigRat total(0);
    for (const auto& e : m.exponents) total += e;
    CHECK(total == 1);
  }
}

TEST_CASE("effective variable reduction: four variables down to three")
{
  // 1 - y - z - xz - xu - xzu - xyu reduces to the 3-variable
  // 1 - y - z - v - yv - zv
  QExpr q = parse("1/(1 - y - z - x*z - x*u - x*z*u - x*y*u)");
  auto rep = effective_variable_reduction(q);
  CHECK(rep.changed);
  CHECK(rep.reduced.n_vars() == 3);
  CHECK(rep.reduced.factors[0].first.monomials.size() == 5);
}

TEST_CASE("effective variable reduction leaves irreducible input unchanged")
{
  QExpr q = parse("1/(1 - x - y - z)");
  auto rep = effective_variable_reduction(q);
  CHECK_FALSE(rep.changed);
  CHECK(rep.reduced.n_vars() == 3);
}
