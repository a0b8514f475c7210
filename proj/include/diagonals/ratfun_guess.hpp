#ifndef DIAGONALS_RATFUN_GUESS_HPP
#define DIAGONALS_RATFUN_GUESS_HPP

#include <diagonals/diagonal.hpp>
#include <diagonals/qexpr.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace diag {

struct Unbalanced : std::runtime_error {
  Unbalanced() : std::runtime_error("factorial term is not degree-balanced") {}
};
struct NotMultinomialReducible : std::runtime_error {
  NotMultinomialReducible()
      : std::runtime_error("rewrite rules exhausted before reaching a single numerator")
  {
  }
};
struct NoAssignment : std::runtime_error {
  NoAssignment() : std::runtime_error("no variable assignment satisfies the constraints") {}
};
struct UnderdeterminedSystem : std::runtime_error {
  UnderdeterminedSystem() : std::runtime_error("exponent system is underdetermined") {}
};

// integer linear form over summation indices (no constant term)
struct LinForm {
  std::map<std::string, long> c;

  long coeff(const std::string& v) const
  {
    auto it = c.find(v);
    return it == c.end() ? 0 : it->second;
  }
  bool is_zero() const
  {
    for (const auto& [k, v] : c)
      if (v) return false;
    return true;
  }
  long eval(const std::map<std::string, long>& vals) const
  {
    long s = 0;
    for (const auto& [k, v] : c) s += v * vals.at(k);
    return s;
  }
  friend LinForm operator+(LinForm a, const LinForm& b)
  {
    for (const auto& [k, v] : b.c) {
      a.c[k] += v;
      if (!a.c[k]) a.c.erase(k);
    }
    return a;
  }
  friend LinForm operator-(LinForm a, const LinForm& b)
  {
    for (const auto& [k, v] : b.c) {
      a.c[k] -= v;
      if (!a.c[k]) a.c.erase(k);
    }
    return a;
  }
  friend bool operator==(const LinForm& a, const LinForm& b) { return a.c == b.c; }
  friend bool operator<(const LinForm& a, const LinForm& b) { return a.c < b.c; }
  std::string to_string() const;
};

// coefficient formula: ratio of factorials of linear forms with geometric
// weights, summed over the inner indices (the first index is the diagonal one)
struct FactorialTerm {
  std::vector<std::string> indices; // indices[0] is the outer (diagonal) index
  std::vector<std::pair<LinForm, int>> numerator;   // (form, multiplicity)
  std::vector<std::pair<LinForm, int>> denominator;
  std::vector<std::pair<BigRat, LinForm>> weights;  // base^form
  // general Pochhammer factors (a)_form, kept for evaluation only (true
  // = numerator, false = denominator)
  std::vector<std::tuple<BigRat, LinForm, bool>> pochhammers;
  // binomial/multinomial block structure when the input was written with
  // C(.,.) / M(.;...) factors: list of part-form lists, each with its total
  std::vector<std::pair<LinForm, std::vector<LinForm>>> blocks;

  bool balanced() const;
};

FactorialTerm parse_factorial_term(const std::string& text);

// exact value of the summed coefficient at outer index n
BigRat eval_factorial_term(const FactorialTerm& t, long n);

// multiplicative relations among the unknown monomials T_j: prod T_j^{e_j}
// = constant * t^{t_power}
struct MonomialRelation {
  std::vector<BigRat> expo;
  long t_power = 0;
  BigRat constant{1};
};

struct MonomialConstraintSet {
  std::vector<LinForm> slots;            // one unknown monomial per slot
  std::vector<MonomialRelation> relations;
  bool product_template = false;         // Q = 1 - prod of block sums
  std::vector<std::vector<std::size_t>> block_slots; // slot groups per factor
};

MonomialConstraintSet derive_constraints(const FactorialTerm& term);

// backtracking assignment of free slots to fresh variables (and products /
// roots), derived slots solved from the relations; negative exponents are
// rejected. Returns the first candidate accepted by `accept` (or the first
// structurally valid one when accept is empty).
std::optional<QExpr> assign_monomials(const MonomialConstraintSet& cs, std::size_t n_vars,
                                      const std::function<bool(const QExpr&)>& accept = {});

bool verify_candidate(const QExpr& q, const std::function<BigRat(long)>& oracle, long n_terms);

// order-one intertwiner condition: every kernel vector of the exponent matrix has
// coordinate sum zero; then Diag(1/Q^2) = (a t D + 1) Diag(1/Q) with
// a = sum of any particular solution of A v = 1
struct IntertwinerCondition {
  bool holds = false;
  BigRat slope{0};
};
IntertwinerCondition order_one_intertwiner_condition(const ExponentMatrix& em);

bool verify_power_relation(const QExpr& q, const BigRat& a, long n_terms);

} // namespace diag

#endif // DIAGONALS_RATFUN_GUESS_HPP
