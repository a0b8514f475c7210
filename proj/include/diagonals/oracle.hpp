#ifndef DIAGONALS_ORACLE_HPP
#define DIAGONALS_ORACLE_HPP

#include <diagonals/ratfun_guess.hpp>

#include <map>
#include <string>
#include <vector>

namespace diag {

// Coefficient oracle for long series: either a factorial-term formula
// (sums / factorials / binomials / Pochhammer / geometric weights, the
// catalog AST) or a named native generator for the constant-term sequences
// whose nested sums need factored evaluation (documented in docs/formats.md).
struct CoefficientOracle {
  enum Kind { Term, Native } kind = Term;
  FactorialTerm term;
  std::string native_name;
  std::map<std::string, BigRat> params;

  static CoefficientOracle from_term(const std::string& text)
  {
    CoefficientOracle o;
    o.kind = Term;
    o.term = parse_factorial_term(text);
    return o;
  }
  static CoefficientOracle native(const std::string& name,
                                  std::map<std::string, BigRat> params = {})
  {
    CoefficientOracle o;
    o.kind = Native;
    o.native_name = name;
    o.params = std::move(params);
    return o;
  }
};

BigRat oracle_eval(const CoefficientOracle& o, long n);
std::vector<BigRat> oracle_prefix(const CoefficientOracle& o, long n_terms);

// native generators, also usable directly:

// LGF of the d-dimensional fcc lattice: constant term of e_2(c_1..c_d)^p
std::vector<BigRat> fcc_ct_prefix(int d, long n_terms);

// the 4-variable structure function lambda = e_3(c_1..c_4)
std::vector<BigRat> guttmann_e3_prefix(long n_terms);

// LGF of the d-dimensional sc lattice: C(2p,p) * sum multinomial(p;k)^2
std::vector<BigRat> sc_lgf_prefix(int d, long n_terms);

// d-dimensional diamond: sum multinomial(p; k_1..k_{d+1})^2
std::vector<BigRat> diamond_lgf_prefix(int d, long n_terms);

// the b-parameter family Diag(1/(Q1 Q2)), Q1 = 1-x-y-z-u, Q2 = 1-x-y-b z
std::vector<BigRat> b_sweep_prefix(const BigRat& b, long n_terms);

} // namespace diag

#endif // DIAGONALS_ORACLE_HPP
