#ifndef DIAGONALS_OPALGEBRA_HPP
#define DIAGONALS_OPALGEBRA_HPP

#include <diagonals/diffop.hpp>
#include <diagonals/frobenius.hpp>
#include <diagonals/guess.hpp>
#include <diagonals/ratfun.hpp>

#include <optional>
#include <string>
#include <vector>

namespace diag {

struct GuessBudgetExceeded : std::runtime_error {
  explicit GuessBudgetExceeded(const std::string& m) : std::runtime_error(m) {}
};

// W with L2 * W = cofactor * L1 (maps solutions of L1 to solutions of L2);
// the relation is verified by exact expansion before returning
struct Intertwiner {
  DiffOp W;
  RatOp cofactor;
  std::string relation = "L2*W = cofactor*L1";
};

std::optional<Intertwiner> intertwiner_search(const DiffOp& L1, const DiffOp& L2,
                                              long max_order, long max_degree);

struct AdjointVerdict {
  bool found = false;
  // twist r(t) with conj_{r^(1/2)}(L) homomorphic to adjoint(L); degree 0
  // means the direct (untwisted) homomorphism
  UniPoly twist;
  std::optional<Intertwiner> witness;
  long order_budget = 0, degree_budget = 0;
};

AdjointVerdict adjoint_homomorphic(const DiffOp& L, long max_order = -1, long max_degree = 40);

struct SquareConfig {
  long extra_terms = 64;     // beyond 3x the generic order
  long op_max_degree = 48;   // degree budget when constructing the operator
  bool want_operator = false;
  std::size_t primes = 4;
};

struct SquareResult {
  long order = 0;          // dimension of the product span
  long generic_order = 0;  // q(q+1)/2 or q(q-1)/2
  std::optional<DiffOp> op;
};

SquareResult sym_square(const DiffOp& L, const SquareConfig& cfg = {});
SquareResult ext_square(const DiffOp& L, const SquareConfig& cfg = {});

// all rational solutions p/q with q a product of bounded powers of the
// leading-coefficient square-free factors and deg p <= degree_bound
std::vector<RatFun> rational_solutions(const DiffOp& L, long degree_bound,
                                       int denominator_power = 2);

struct GaloisSignature {
  enum Kind { SymplecticSignature, OrthogonalSignature, NoSignatureFound } kind =
      NoSignatureFound;
  long ext2_order = -1, sym2_order = -1;
  std::string evidence;
};

GaloisSignature galois_signature(const DiffOp& L, const SquareConfig& cfg = {});

// Grothendieck-Katz test: A_p = 0 for the companion matrix iterate mod p
bool p_curvature_is_zero(const DiffOp& L, std::uint64_t p);

} // namespace diag

#endif // DIAGONALS_OPALGEBRA_HPP
