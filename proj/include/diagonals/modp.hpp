#ifndef DIAGONALS_MODP_HPP
#define DIAGONALS_MODP_HPP

#include <diagonals/bigrat.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace diag {

struct BadPrime : std::runtime_error {
  explicit BadPrime(const std::string& m) : std::runtime_error(m) {}
};

// Z/p for an odd prime p fitting a machine word (p < 2^62).
class PrimeField {
public:
  explicit PrimeField(std::uint64_t p) : p_(p) {}
  std::uint64_t p() const { return p_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const
  {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const
  {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a ? p_ - a : 0; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const
  {
    return (std::uint64_t)((unsigned __int128)a * b % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const
  {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const
  {
    if (a == 0) throw BadPrime("division by zero mod p");
    return pow(a, p_ - 2);
  }

  std::uint64_t from_int(const BigInt& z) const
  {
    BigInt m = z % BigInt((unsigned long)p_);
    if (m < 0) m += BigInt((unsigned long)p_);
    return m.get_ui();
  }
  // throws BadPrime when the denominator vanishes mod p
  std::uint64_t from_rat(const BigRat& r) const
  {
    std::uint64_t d = from_int(BigInt(r.get_den()));
    if (d == 0) throw BadPrime("denominator divisible by p");
    return mul(from_int(BigInt(r.get_num())), inv(d));
  }

private:
  std::uint64_t p_;
};

// value mod p together with its field
struct PrimeFieldElem {
  std::uint64_t value = 0;
  std::uint64_t p = 0;
};

// a fixed supply of ~62-bit primes for modular runs
std::vector<std::uint64_t> guessing_primes(std::size_t count, std::size_t skip = 0);

// dense matrix over Z/p in row-major order
struct MatModP {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint64_t> a;

  MatModP() = default;
  MatModP(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  std::uint64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::uint64_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Reduced row echelon form in place; returns pivot column of each pivot row.
// Column order is the natural 0..cols-1, which makes nullspace bases and pivot
// patterns deterministic.
std::vector<std::size_t> rref_mod_p(MatModP& m, const PrimeField& F);

// Nullspace basis (each vector length cols) from the RREF; basis vectors are
// in the canonical free-column form, listed by increasing free column.
std::vector<std::vector<std::uint64_t>> nullspace_mod_p(MatModP m, const PrimeField& F);

std::size_t rank_mod_p(MatModP m, const PrimeField& F);

// CRT combine: x = residues[i] mod primes[i]; result in [0, prod)
BigInt crt_combine(const std::vector<std::uint64_t>& residues,
                   const std::vector<std::uint64_t>& primes);

// Rational reconstruction of r from x mod m with |num|, den <= sqrt(m/2).
std::optional<BigRat> rational_reconstruct(const BigInt& x, const BigInt& m);

} // namespace diag

#endif // DIAGONALS_MODP_HPP
