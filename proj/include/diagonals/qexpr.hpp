#ifndef DIAGONALS_QEXPR_HPP
#define DIAGONALS_QEXPR_HPP

#include <diagonals/series.hpp>
#include <diagonals/unipoly.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace diag {

struct SyntaxError : std::runtime_error {
  std::size_t position;
  SyntaxError(std::size_t pos, const std::string& expected)
      : std::runtime_error("syntax error at position " + std::to_string(pos) + ": expected " +
                           expected),
        position(pos)
  {
  }
};
struct UnboundParameter : std::runtime_error {
  explicit UnboundParameter(const std::string& name)
      : std::runtime_error("unbound parameter: " + name)
  {
  }
};
struct NonUnitConstantTerm : std::runtime_error {
  NonUnitConstantTerm() : std::runtime_error("denominator factor has constant term != 1") {}
};
struct NegativeExponentAfterNormalize : std::runtime_error {
  NegativeExponentAfterNormalize()
      : std::runtime_error("monomial keeps a negative exponent after normalization")
  {
  }
};

// coefficient of a generalized monomial: sum of scalar * prod_i p_i(t)^{e_i}
// with p_i(0) = 1; reduces to a plain rational when every term has an empty
// product list
struct CoeffSeries {
  struct Term {
    BigRat scalar{1};
    std::vector<std::pair<UniPoly, BigRat>> tpowers;
  };
  std::vector<Term> terms;

  CoeffSeries() = default;
  explicit CoeffSeries(const BigRat& c)
  {
    if (!is_zero(c)) terms.push_back(Term{c, {}});
  }

  bool is_constant() const
  {
    for (const auto& t : terms)
      if (!t.tpowers.empty()) return false;
    return true;
  }
  bool is_zero_coeff() const { return terms.empty(); }
  BigRat constant_part() const // value at t = 0
  {
    BigRat c(0);
    for (const auto& t : terms) c += t.scalar;
    return c;
  }
  TruncSeries expand(long order) const;
  CoeffSeries scaled(const BigRat& s) const;
};

struct GenMonomial {
  CoeffSeries coeff;
  std::vector<BigRat> exponents; // per declared variable, >= 0 after normalize
};

// constant + sum of monomials; Q(0,...,0) = constant
struct GenPoly {
  BigRat constant{1};
  std::vector<GenMonomial> monomials;
};

struct QExpr {
  std::vector<std::string> variables;           // ordered
  GenPoly numerator;                            // often the constant 1
  std::vector<std::pair<GenPoly, BigRat>> factors; // (Q_i, alpha_i); contributes Q_i^{alpha_i}
  std::vector<std::size_t> diag_vars;           // indices into variables; nonempty

  std::size_t n_vars() const { return variables.size(); }
  bool diag_all() const { return diag_vars.size() == variables.size(); }
};

// Parse the expression DSL (docs/formats.md). Identifiers are variables;
// `t` is the global product of the diagonal variables; templates may declare
// parameters with a leading `param a b :` which must be bound.
QExpr parse(const std::string& text);
QExpr substitute_param(const std::string& templ, const std::map<std::string, BigRat>& bindings);

std::string print(const QExpr& q);

bool operator==(const QExpr& a, const QExpr& b);

struct ReductionReport {
  QExpr reduced;
  std::vector<std::string> steps;
  bool changed = false;
};

// Detects monomials invisible to the diagonal and variable pairs occurring
// only as a product; soundness is by N-term series comparison, not proof.
ReductionReport effective_variable_reduction(const QExpr& q, long check_terms = 8);

} // namespace diag

#endif // DIAGONALS_QEXPR_HPP
