#ifndef DIAGONALS_FROBENIUS_HPP
#define DIAGONALS_FROBENIUS_HPP

#include <diagonals/diffop.hpp>
#include <diagonals/series.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace diag {

struct IrregularSingularity : std::runtime_error {
  IrregularSingularity() : std::runtime_error("irregular singular point (Newton polygon slope != 0)")
  {
  }
};

// analysis point: finite rational t0 or infinity
struct AnalysisPoint {
  bool at_infinity = false;
  BigRat value{0};

  static AnalysisPoint origin() { return {}; }
  static AnalysisPoint at(const BigRat& v) { return {false, v}; }
  static AnalysisPoint infinity() { return {true, BigRat(0)}; }

  std::string to_string() const
  {
    return at_infinity ? "infinity" : diag::to_string(value);
  }
};

struct IndicialData {
  AnalysisPoint point;
  std::vector<std::pair<BigRat, int>> rational_roots; // root, multiplicity
  // square-free factors of the part of the indicial polynomial without
  // rational roots (empty when all roots are rational)
  std::vector<UniPoly> irrational_factors;
  UniPoly indicial_poly;

  int total_rational_multiplicity() const
  {
    int s = 0;
    for (const auto& [r, m] : rational_roots) s += m;
    return s;
  }
};

IndicialData indicial(const DiffOp& L, const AnalysisPoint& point);

// staircase groups: group[j] has log depth j, and layer l of group[j]
// equals layer l－1 of group[j-1] (the shared S_{i,0} structure)
struct FrobeniusBasis {
  AnalysisPoint point;
  std::vector<std::vector<LogSeries>> groups;

  std::size_t solution_count() const
  {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
  }
  int max_log_power() const
  {
    int m = 0;
    for (const auto& g : groups)
      for (const auto& s : g) m = std::max(m, s.log_power());
    return m;
  }
};

FrobeniusBasis frobenius_basis(const DiffOp& L, const AnalysisPoint& point, long n_terms);

int max_log_power(const DiffOp& L, const AnalysisPoint& point);

inline long predict_Nv(const DiffOp& L)
{
  return max_log_power(L, AnalysisPoint::origin()) + 2;
}

bool is_MUM(const DiffOp& L);

// fundamental power-series basis at an ordinary point (y_i = t^i + O(t^r))
std::vector<TruncSeries> ordinary_basis(const DiffOp& L, long n_terms);

// smallest nonnegative rational c (by |numerator|) that is not a root of the
// leading coefficient: a convenient ordinary expansion point
BigRat find_ordinary_point(const DiffOp& L);

struct BoundednessVerdict {
  enum Kind { Bounded, UnboundedEvidence, Inconclusive } kind = Inconclusive;
  BigInt rescale_constant{1};   // Bounded: c with c^n a_n integral for n <= examined
  BigInt witness_prime{0};      // UnboundedEvidence
  long terms_examined = 0;
  std::string note;
};

BoundednessVerdict globally_bounded(const TruncSeries& s, long n_terms = 120,
                                    int prime_budget = 64);

} // namespace diag

#endif // DIAGONALS_FROBENIUS_HPP
