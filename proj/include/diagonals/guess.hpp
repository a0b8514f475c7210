#ifndef DIAGONALS_GUESS_HPP
#define DIAGONALS_GUESS_HPP

#include <diagonals/diffop.hpp>
#include <diagonals/modp.hpp>
#include <diagonals/series.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace diag {

struct InsufficientTerms : std::runtime_error {
  explicit InsufficientTerms(const std::string& m) : std::runtime_error(m) {}
};

struct GuessConfig {
  long max_order = 12;
  long max_degree = 60;
  long guard_terms = 8; // extra checked coefficients beyond the linear system
  std::size_t prime_count = 6;
  // systems with at most this many unknowns take the fraction-free exact
  // path; larger ones go through multi-prime CRT + exact verification
  std::size_t exact_column_threshold = 64;

  GuessConfig() = default;
};

struct GuessResult {
  DiffOp op;
  long order = 0;
  long degree = 0;
  // order minimality is budget-relative: no operator of smaller order exists
  // with degree <= the reported certificate degree
  bool minimal_certified = false;
  long certificate_degree = 0;
};

// operator with coefficients over Z/p (image of a guessed operator)
struct ModOp {
  std::uint64_t p = 0;
  long order = 0;
  std::vector<std::vector<std::uint64_t>> coeffs; // [i][j]: t^j D^i

  long degree() const
  {
    long d = 0;
    for (const auto& c : coeffs)
      for (std::size_t j = 0; j < c.size(); ++j)
        if (c[j]) d = std::max<long>(d, (long)j);
    return d;
  }
};

// Minimal-order linear ODE with polynomial coefficients annihilating s
// (through every supplied term, including guard terms). NotFound = nullopt.
std::optional<GuessResult> guess_min_ode(const TruncSeries& s, const GuessConfig& cfg);

// same, for a common annihilator of several series
std::optional<GuessResult> guess_common_min_ode(const std::vector<TruncSeries>& series,
                                                const GuessConfig& cfg);

// modular image of the minimal operator (high probability); used to fix
// (order, degree) cheaply and to cross-check exact results
std::optional<ModOp> guess_mod_p(const std::vector<std::uint64_t>& coeffs_mod_p,
                                 std::uint64_t p, const GuessConfig& cfg);

// true iff no operator of order L.order()-1 and degree <= certificate degree
// annihilates s; sound via a full-rank certificate mod p
bool min_order_certificate(const TruncSeries& s, const DiffOp& L, const GuessConfig& cfg);

// reduce an exact series mod p (BadPrime if a denominator vanishes)
std::vector<std::uint64_t> series_mod_p(const TruncSeries& s, const PrimeField& F);

DiffOp op_mod_p_lift_for_test(const ModOp& m); // small helper used by tests

} // namespace diag

#endif // DIAGONALS_GUESS_HPP
