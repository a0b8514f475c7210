#ifndef DIAGONALS_DIAGONAL_HPP
#define DIAGONALS_DIAGONAL_HPP

#include <diagonals/qexpr.hpp>
#include <diagonals/series.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace diag {

struct TruncationTooDeep : std::runtime_error {
  long reached;
  explicit TruncationTooDeep(long p)
      : std::runtime_error("diagonal work budget exceeded at degree " + std::to_string(p)),
        reached(p)
  {
  }
};
struct NonNormalizedExpr : std::runtime_error {
  explicit NonNormalizedExpr(const std::string& m) : std::runtime_error(m) {}
};
struct InsufficientDegree : std::runtime_error {
  InsufficientDegree() : std::runtime_error("bivariate series known to insufficient degree") {}
};

enum class DiagEngine { Fast, BruteForce, Both };

struct DiagRequest {
  QExpr expr;
  long n_terms = 8;
  DiagEngine engine = DiagEngine::Both;
  std::uint64_t work_budget = 0; // 0: use DIAGONALS_WORK_BUDGET env or default
};

// integer-scaled exponent matrix of the stacked factor monomials (rows =
// diagonal variables, columns = monomials); carries the per-factor grouping
struct ExponentMatrix {
  std::vector<std::vector<BigRat>> A;    // [var][monomial], original exponents
  std::vector<CoeffSeries> c;           // per monomial
  std::vector<std::size_t> factor_of;   // monomial -> factor index
  std::vector<BigRat> alpha;            // factor powers
};

ExponentMatrix exponent_matrix(const QExpr& q);

// exact first n_terms coefficients of the diagonal in t = prod(diag vars)
TruncSeries diagonal(const DiagRequest& req);

inline TruncSeries diagonal(const QExpr& q, long n, DiagEngine e = DiagEngine::Fast)
{
  return diagonal(DiagRequest{q, n, e, 0});
}

TruncSeries diag_brute_force(const QExpr& q, long n);
TruncSeries diag_brute_force_budget(const QExpr& q, long n, std::uint64_t work_budget);

// subset diagonal: series in s = prod(subset) whose coefficients are
// polynomials in the spectator variables
struct SpectatorPoly {
  std::map<std::vector<long>, BigRat> terms; // spectator exponent vector -> coeff
  bool operator==(const SpectatorPoly&) const = default;
};
std::vector<SpectatorPoly> diag_subset(const QExpr& q, const std::vector<std::string>& subset,
                                       long n_terms);

// evaluate a subset-diagonal at rational spectator values
TruncSeries spectator_eval(const std::vector<SpectatorPoly>& coeffs,
                           const std::vector<BigRat>& values);

// dense bivariate truncated series c[i][j] u^i s^j, known for i + j <= total_degree
struct BivarSeries {
  long total_degree = 0;
  std::vector<std::vector<BigRat>> c;

  explicit BivarSeries(long deg) : total_degree(deg), c(deg + 1)
  {
    for (long i = 0; i <= deg; ++i) c[i].assign(deg - i + 1, BigRat(0));
  }
  const BigRat& at(long i, long j) const { return c[i][j]; }
  void set(long i, long j, const BigRat& v) { c[i][j] = v; }
};

TruncSeries bivariate_diag(const BivarSeries& s, long n_terms);

// regression property: Diag(c(t) * F) = c(t) * Diag(F) for a series c in
// the global product; verified to n terms
bool global_product_factor_property_check(const TruncSeries& c, const QExpr& expr, long n_terms);

} // namespace diag

#endif // DIAGONALS_DIAGONAL_HPP
