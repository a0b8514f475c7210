#ifndef DIAGONALS_BIGRAT_HPP
#define DIAGONALS_BIGRAT_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace diag {

// Exact arbitrary-precision arithmetic. BigRat is always reduced with a
// positive denominator (mpq canonical form).
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigRat rat(long num, long den = 1)
{
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

// accepts "p", "p/q" and "-p/q"
inline BigRat rat_from_string(const std::string& s)
{
  BigRat r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  r.canonicalize();
  return r;
}

inline bool is_integer(const BigRat& r)
{
  return r.get_den() == 1;
}

inline bool is_zero(const BigRat& r)
{
  return sgn(r) == 0;
}

inline BigInt num(const BigRat& r) { return r.get_num(); }
inline BigInt den(const BigRat& r) { return r.get_den(); }

inline long to_long(const BigInt& z)
{
  if (!z.fits_slong_p())
    throw std::overflow_error("BigInt does not fit in long");
  return z.get_si();
}

inline long to_long(const BigRat& r)
{
  if (!is_integer(r))
    throw std::invalid_argument("rational is not an integer");
  return to_long(BigInt(r.get_num()));
}

inline BigInt int_pow(const BigInt& base, unsigned long e)
{
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// r^e for integer e (e may be negative if r != 0)
inline BigRat rat_pow(const BigRat& r, long e)
{
  if (e == 0)
    return BigRat(1);
  bool inv = e < 0;
  unsigned long a = inv ? -(unsigned long)e : (unsigned long)e;
  BigRat out;
  mpz_pow_ui(out.get_num_mpz_t(), r.get_num_mpz_t(), a);
  mpz_pow_ui(out.get_den_mpz_t(), r.get_den_mpz_t(), a);
  if (inv) {
    if (is_zero(r)) throw std::domain_error("0^negative");
    out = 1 / out;
  }
  out.canonicalize();
  return out;
}

inline BigInt factorial(unsigned long n)
{
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt binomial(const BigInt& n, unsigned long k)
{
  BigInt r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k)
{
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// constant term of (x + 1/x)^m: C(m, m/2) for even m, 0 otherwise
inline BigInt central_ct(long m)
{
  if (m < 0 || (m & 1)) return BigInt(0);
  return binomial((unsigned long)m, (unsigned long)(m / 2));
}

// rising factorial (a)_k = a (a+1) ... (a+k-1)
inline BigRat pochhammer(const BigRat& a, unsigned long k)
{
  BigRat r(1);
  BigRat f = a;
  for (unsigned long i = 0; i < k; ++i) {
    r *= f;
    f += 1;
  }
  return r;
}

inline std::string to_string(const BigRat& r)
{
  return r.get_str();
}

inline std::string to_string(const BigInt& z)
{
  return z.get_str();
}

} // namespace diag

#endif // DIAGONALS_BIGRAT_HPP
