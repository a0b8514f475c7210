#ifndef DIAGONALS_CALABI_YAU_HPP
#define DIAGONALS_CALABI_YAU_HPP

#include <diagonals/diffop.hpp>
#include <diagonals/frobenius.hpp>
#include <diagonals/series.hpp>

#include <optional>
#include <string>
#include <vector>

namespace diag {

struct NotMUM : std::runtime_error {
  NotMUM() : std::runtime_error("operator is not MUM at the origin") {}
};

// normalized Frobenius staircase layers at a MUM point: the top solution is
// S0 ln^k/k! + S10 ln^{k-1}/(k-1)! + ... with S0(0) = 1 and S_{i,0}(0) = 0
struct MumQuadruple {
  TruncSeries S0, S10, S20, S30;
  int depth = 0; // number of available layers - 1
};

MumQuadruple mum_quadruple(const DiffOp& L, long n_terms);

TruncSeries nome(const DiffOp& L, long n_terms);       // q(t) = t exp(S10/S0)
TruncSeries mirror_map(const DiffOp& L, long n_terms); // t(q), compositional inverse
TruncSeries yukawa(const DiffOp& L, long n_terms);     // K(q) = d^2/dz^2 (S2/S0), K(0)=1

// n_m = (c_m - sum_{j|m, j<m} n_j j^3) / m^3 from the Lambert expansion
std::vector<BigRat> instanton_numbers(const TruncSeries& K, long count,
                                      std::optional<long> n0 = std::nullopt);

struct CYReport {
  bool mum = false;
  std::vector<BigRat> infinity_exponents;
  bool exponent_pairing = false; // e_i + e_{r+1-i} all equal (a rational)
  bool s0_integral = false;
  bool nome_integral = false;
  bool mirror_integral = false;
  bool yukawa_integral = false;
  bool instantons_integral = false; // with the n0 normalizer below
  long n0 = 1;                      // smallest positive integer with n0*n_j integral
  std::vector<BigRat> instantons;
  bool all_pass = false;
  std::string notes;
};

CYReport cy_check(const DiffOp& L, long n_terms = 12);

// verification helper: L5 annihilates every Wronskian of an ordinary basis
// of L4 (the ext^2 relation, checked rather than discovered)
bool check_ext2_relation(const DiffOp& L5, const DiffOp& L4, long n_terms = 60);

} // namespace diag

#endif // DIAGONALS_CALABI_YAU_HPP
