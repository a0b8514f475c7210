#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diagonals/ratfun_guess.hpp>

using namespace diag;

namespace {

std::function<BigRat(long)> term_oracle(const std::string& text)
{
  FactorialTerm t = parse_factorial_term(text);
  return [t](long n) { return eval_factorial_term(t, n); };
}

} // namespace

TEST_CASE("term parser and evaluation")
{
  FactorialTerm cy2 = parse_factorial_term("sum[n] (10n)!/(n!^3*(2n)!*(5n)!)");
  CHECK(cy2.balanced());
  CHECK(eval_factorial_term(cy2, 0) == 1);
  CHECK(eval_factorial_term(cy2, 1) == 15120);
  CHECK(eval_factorial_term(cy2, 2) == rat_from_string("3491888400"));

  FactorialTerm cy16 = parse_factorial_term("sum[n,k] C(2n,n)*C(n,k)^2*C(2k,k)*C(2n-2k,n-k)");
  CHECK(eval_factorial_term(cy16, 1) == 8);
  CHECK(eval_factorial_term(cy16, 2) == 168);
  CHECK(eval_factorial_term(cy16, 3) == 5120);

  CHECK_THROWS_AS(parse_factorial_term("sum[n] (3n)!/(n!^2)"), Unbalanced);
}

TEST_CASE("CY16: rewrite reaches the four reference relations")
{
  FactorialTerm cy16 = parse_factorial_term("sum[n,k] C(2n,n)*C(n,k)^2*C(2k,k)*C(2n-2k,n-k)");
  MonomialConstraintSet cs = derive_constraints(cy16);
  CHECK_FALSE(cs.product_template);
  CHECK(cs.slots.size() == 8);
  // four relations: one per index (n, k, and the two rewrite indices)
  CHECK(cs.relations.size() == 4);
  // the n-relation has t on the right
  int t_rels = 0;
  for (const auto& r : cs.relations) t_rels += r.t_power != 0;
  CHECK(t_rels == 1);
}

TEST_CASE("(3n)!/n!^3: three monomials with T1 T2 T3 = t")
{
  FactorialTerm t = parse_factorial_term("sum[n] (3n)!/(n!^3)");
  MonomialConstraintSet cs = derive_constraints(t);
  CHECK(cs.slots.size() == 3);
  REQUIRE(cs.relations.size() == 1);
  CHECK(cs.relations[0].t_power == 1);
  for (const auto& e : cs.relations[0].expo) CHECK(e == 1);

  auto q = assign_monomials(cs, 3);
  REQUIRE(q.has_value());
  CHECK(q->factors[0].first.monomials.size() == 3);
  CHECK(verify_candidate(*q, term_oracle("sum[n] (3n)!/(n!^3)"), 6));
}

TEST_CASE("CY16 assignment with 5 variables reproduces the reference polynomial")
{
  FactorialTerm cy16 = parse_factorial_term("sum[n,k] C(2n,n)*C(n,k)^2*C(2k,k)*C(2n-2k,n-k)");
  MonomialConstraintSet cs = derive_constraints(cy16);
  auto oracle = term_oracle("sum[n,k] C(2n,n)*C(n,k)^2*C(2k,k)*C(2n-2k,n-k)");
  auto q = assign_monomials(cs, 5, [&](const QExpr& cand) {
    return verify_candidate(cand, oracle, 5);
  });
  REQUIRE(q.has_value());
  // reference shape: x + y + z + u + v*(xyz + xyu + xzu + yzu):
  // four single-variable monomials and four degree-4 monomials
  const auto& mono = q->factors[0].first.monomials;
  CHECK(mono.size() == 8);
  int singles = 0, quads = 0;
  for (const auto& m : mono) {
    BigRat deg(0);
    for (const auto& e : m.exponents) deg += e;
    if (deg == 1) ++singles;
    if (deg == 4) ++quads;
  }
  CHECK(singles == 4);
  CHECK(quads == 4);
  TruncSeries d = diagonal(*q, 4, DiagEngine::Fast);
  CHECK(d[0] == 1);
  CHECK(d[1] == 8);
  CHECK(d[2] == 168);
  CHECK(d[3] == 5120);
}

TEST_CASE("the 4-variable CY16 candidate is rejected by verification")
{
  FactorialTerm cy16 = parse_factorial_term("sum[n,k] C(2n,n)*C(n,k)^2*C(2k,k)*C(2n-2k,n-k)");
  MonomialConstraintSet cs = derive_constraints(cy16);
  auto oracle = term_oracle("sum[n,k] C(2n,n)*C(n,k)^2*C(2k,k)*C(2n-2k,n-k)");
  // an assignment with 4 variables exists structurally...
  auto q4 = assign_monomials(cs, 4);
  REQUIRE(q4.has_value());
  // ...but its diagonal does not match CY16
  CHECK_FALSE(verify_candidate(*q4, oracle, 4));
  // and no genuinely rational (integer-exponent) 4-variable assignment
  // passes verification
  auto integral = [](const QExpr& cand) {
    for (const auto& m : cand.factors[0].first.monomials)
      for (const auto& e : m.exponents)
        if (!is_integer(e)) return false;
    return true;
  };
  auto q4v = assign_monomials(cs, 4, [&](const QExpr& cand) {
    return integral(cand) && verify_candidate(cand, oracle, 4);
  });
  CHECK_FALSE(q4v.has_value());
}

TEST_CASE("Zagier A: (n choose k)^3 yields a 3-variable Q")
{
  FactorialTerm z = parse_factorial_term("sum[n,k] C(n,k)^3");
  MonomialConstraintSet cs = derive_constraints(z);
  CHECK(cs.product_template);
  auto oracle = term_oracle("sum[n,k] C(n,k)^3");
  CHECK(oracle(1) == 2);
  CHECK(oracle(2) == 10);
  CHECK(oracle(4) == 346);
  auto q = assign_monomials(cs, 3, [&](const QExpr& cand) {
    return verify_candidate(cand, oracle, 5);
  });
  REQUIRE(q.has_value());
  CHECK(q->n_vars() == 3);
}

TEST_CASE("factorial-ratio rows: derive -> assign(5) -> verify")
{
  // rows whose coefficient is a pure ratio of factorials; rows 3, 5 and 11
  // are supplied in an equivalent single-numerator / block form (the
  // pair-splitting rules do not reach them from the bare ratio)
  struct Row {
    const char* id;
    const char* term;
  };
  const Row rows[] = {
      {"row1", "sum[n] (5n)!/(n!^5)"},
      {"row2", "sum[n] (10n)!/(n!^3*(2n)!*(5n)!)"},
      {"row3", "sum[n] C(2n,n)^4"},
      {"row5", "sum[n,a,b,c] (3n)!/((n-a-b)!*(a+b)!*(n-a-c)!*(a+c)!*a!*b!*c!*(n-a-b-c)!)"},
      {"row6", "sum[n] (2n)!*(4n)!/(n!^6)"},
      {"row7", "sum[n] (8n)!/(n!^4*(4n)!)"},
      {"row8", "sum[n] (6n)!/(n!^4*(2n)!)"},
      {"row11", "sum[n,a,b] (4n)!/(n!*(n-a)!*(n-b)!*(a+b)!*a!*b!*(n-a-b)!)"},
      {"row14", "sum[n] (2n)!*(6n)!/(n!^5*(3n)!)"},
  };
  // reference values: the original factorial ratios
  const char* ratios[] = {
      "sum[n] (5n)!/(n!^5)",
      "sum[n] (10n)!/(n!^3*(2n)!*(5n)!)",
      "sum[n] (2n)!^4/(n!^8)",
      "sum[n] (2n)!^2*(3n)!/(n!^7)",
      "sum[n] (2n)!*(4n)!/(n!^6)",
      "sum[n] (8n)!/(n!^4*(4n)!)",
      "sum[n] (6n)!/(n!^4*(2n)!)",
      "sum[n] (3n)!*(4n)!/(n!^5*(2n)!)",
      "sum[n] (2n)!*(6n)!/(n!^5*(3n)!)",
  };
  for (std::size_t i = 0; i < std::size(rows); ++i) {
    CAPTURE(rows[i].id);
    auto oracle = term_oracle(ratios[i]);
    auto enc = term_oracle(rows[i].term);
    for (long n = 0; n <= 3; ++n) CHECK(enc(n) == oracle(n)); // encodings agree
    MonomialConstraintSet cs = derive_constraints(parse_factorial_term(rows[i].term));
    auto q = assign_monomials(cs, 5, [&](const QExpr& cand) {
      return verify_candidate(cand, oracle, 5);
    });
    REQUIRE(q.has_value());
    CHECK(verify_candidate(*q, oracle, 6));
  }
}

TEST_CASE("geometric weight lands on a monomial coefficient")
{
  FactorialTerm t = parse_factorial_term("sum[n,k] 3^(k)*(3n)!/(k!*(n-k)!*n!^2)");
  MonomialConstraintSet cs = derive_constraints(t);
  auto oracle = [&](long n) { return eval_factorial_term(t, n); };
  auto q = assign_monomials(cs, 3, [&](const QExpr& cand) {
    return verify_candidate(cand, oracle, 5);
  });
  REQUIRE(q.has_value());
  bool saw_coeff_3 = false;
  for (const auto& m : q->factors[0].first.monomials)
    if (m.coeff.is_constant() && m.coeff.constant_part() == -3) saw_coeff_3 = true;
  CHECK(saw_coeff_3);
}

TEST_CASE("order-one intertwiner condition")
{
  // Q = 1 - (x+y+z): square system, a = 3
  {
    QExpr q = parse("1/(1 - x - y - z)");
    auto cond = order_one_intertwiner_condition(exponent_matrix(q));
    CHECK(cond.holds);
    CHECK(cond.slope == 3);
  }
  // Q = 1 - (x+y+z^r): a = (2r+1)/r
  for (long r : {2L, 3L}) {
    QExpr q = parse("1/(1 - x - y - z^" + std::to_string(r) + ")");
    auto cond = order_one_intertwiner_condition(exponent_matrix(q));
    CHECK(cond.holds);
    CHECK(cond.slope == BigRat(2 * r + 1) / BigRat(r));
  }
  // a generic 3x5 matrix violating the two conditions
  {
    QExpr q = parse("1/(1 - x - y - z - x*y^2 - x^2*z)");
    auto cond = order_one_intertwiner_condition(exponent_matrix(q));
    CHECK_FALSE(cond.holds);
  }
}

TEST_CASE("verify_power_relation")
{
  QExpr q1 = parse("1/(1 - x - y - z)");
  CHECK(verify_power_relation(q1, BigRat(3), 8));
  CHECK_FALSE(verify_power_relation(q1, BigRat(2), 8));

  QExpr q2 = parse("1/(1 - x - y - z^2)");
  CHECK(verify_power_relation(q2, rat(5, 2), 8));

  QExpr q3 = parse("1/(1 - x - y - z^3)");
  CHECK(verify_power_relation(q3, rat(7, 3), 8));
}

TEST_CASE("underdetermined exponent systems are rejected")
{
  // 2 variables, 5 monomials: more than variables + 2
  QExpr q = parse("1/(1 - x - y - x*y - x^2*y - x*y^2)");
  CHECK_THROWS_AS(order_one_intertwiner_condition(exponent_matrix(q)), UnderdeterminedSystem);
}
