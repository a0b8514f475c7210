#ifndef DIAGONALS_UNIPOLY_HPP
#define DIAGONALS_UNIPOLY_HPP

#include <diagonals/bigrat.hpp>

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace diag {

// Dense univariate polynomial over Q in the variable t.
// Trailing zero coefficients are trimmed; zero is the empty list.
class UniPoly {
public:
  UniPoly() = default;
  explicit UniPoly(BigRat c)
  {
    if (!is_zero(c)) c_.push_back(std::move(c));
  }
  explicit UniPoly(std::vector<BigRat> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly monomial(const BigRat& c, std::size_t deg)
  {
    if (is_zero(c)) return UniPoly();
    std::vector<BigRat> v(deg + 1, BigRat(0));
    v[deg] = c;
    return UniPoly(std::move(v));
  }

  bool is_zero_poly() const { return c_.empty(); }
  // degree of zero polynomial reported as -1
  long degree() const { return (long)c_.size() - 1; }
  const std::vector<BigRat>& coeffs() const { return c_; }

  const BigRat& operator[](std::size_t i) const
  {
    static const BigRat zero(0);
    return i < c_.size() ? c_[i] : zero;
  }

  void set_coeff(std::size_t i, const BigRat& v)
  {
    if (i >= c_.size()) {
      if (is_zero(v)) return;
      c_.resize(i + 1, BigRat(0));
    }
    c_[i] = v;
    trim();
  }

  const BigRat& leading() const
  {
    assert(!c_.empty());
    return c_.back();
  }

  BigRat eval(const BigRat& x) const
  {
    BigRat r(0);
    for (std::size_t i = c_.size(); i-- > 0;)
      r = r * x + c_[i];
    return r;
  }

  UniPoly derivative() const
  {
    if (c_.size() <= 1) return UniPoly();
    std::vector<BigRat> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      d[i - 1] = c_[i] * BigRat((long)i);
    return UniPoly(std::move(d));
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b)
  {
    std::vector<BigRat> r(std::max(a.c_.size(), b.c_.size()), BigRat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return UniPoly(std::move(r));
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b)
  {
    std::vector<BigRat> r(std::max(a.c_.size(), b.c_.size()), BigRat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return UniPoly(std::move(r));
  }

  friend UniPoly operator-(const UniPoly& a)
  {
    std::vector<BigRat> r(a.c_);
    for (auto& x : r) x = -x;
    return UniPoly(std::move(r));
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b)
  {
    if (a.is_zero_poly() || b.is_zero_poly()) return UniPoly();
    std::vector<BigRat> r(a.c_.size() + b.c_.size() - 1, BigRat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r[i + j] += a.c_[i] * b.c_[j];
    }
    return UniPoly(std::move(r));
  }

  friend UniPoly operator*(const UniPoly& a, const BigRat& s)
  {
    if (is_zero(s)) return UniPoly();
    std::vector<BigRat> r(a.c_);
    for (auto& x : r) x *= s;
    return UniPoly(std::move(r));
  }
  friend UniPoly operator*(const BigRat& s, const UniPoly& a) { return a * s; }

  UniPoly& operator+=(const UniPoly& o) { *this = *this + o; return *this; }
  UniPoly& operator-=(const UniPoly& o) { *this = *this - o; return *this; }
  UniPoly& operator*=(const UniPoly& o) { *this = *this * o; return *this; }

  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  // polynomial division; requires exact or returns remainder too
  static void divmod(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r)
  {
    assert(!b.is_zero_poly());
    std::vector<BigRat> rem(a.c_);
    long db = b.degree();
    std::vector<BigRat> quo;
    if ((long)rem.size() - 1 >= db)
      quo.assign(rem.size() - db, BigRat(0));
    for (long i = (long)rem.size() - 1; i >= db; --i) {
      if (is_zero(rem[i])) continue;
      BigRat f = rem[i] / b.c_.back();
      quo[i - db] = f;
      for (long j = 0; j <= db; ++j)
        rem[i - db + j] -= f * b.c_[j];
    }
    q = UniPoly(std::move(quo));
    r = UniPoly(std::move(rem));
  }

  // t -> t + c
  UniPoly shifted(const BigRat& c) const
  {
    UniPoly r;
    // Horner: p(t+c) = (((a_n)(t+c) + a_{n-1})(t+c) + ...
    UniPoly x(std::vector<BigRat>{c, BigRat(1)});
    for (std::size_t i = c_.size(); i-- > 0;)
      r = r * x + UniPoly(c_[i]);
    return r;
  }

  // t -> c * t
  UniPoly scaled(const BigRat& c) const
  {
    std::vector<BigRat> r(c_);
    BigRat f(1);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] *= f;
      f *= c;
    }
    return UniPoly(std::move(r));
  }

  // t^deg * p(1/t) for deg >= degree()
  UniPoly reversed(std::size_t deg) const
  {
    assert((long)deg >= degree());
    std::vector<BigRat> r(deg + 1, BigRat(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      r[deg - i] = c_[i];
    return UniPoly(std::move(r));
  }

  // largest e with t^e | p (0 for p(0) != 0; 0 for zero poly)
  std::size_t valuation() const
  {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!is_zero(c_[i])) return i;
    return 0;
  }

  std::string to_string(const std::string& var = "t") const;

private:
  void trim()
  {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }

  std::vector<BigRat> c_;
};

// integer-content normalization: returns primitive integer polynomial p / content
// such that normalized has integer coefficients with gcd 1 and positive leading
UniPoly primitive_part(const UniPoly& p);

UniPoly poly_gcd(const UniPoly& a, const UniPoly& b);

// square-free part: p / gcd(p, p')
UniPoly square_free_part(const UniPoly& p);

// distinct rational roots (each once)
std::vector<BigRat> rational_roots(const UniPoly& p);

// rational roots with multiplicities, plus the (content-free) cofactor
// with no rational roots left
struct RootData {
  std::vector<std::pair<BigRat, int>> roots;
  UniPoly rootless_cofactor;
};
RootData rational_roots_with_multiplicity(const UniPoly& p);

} // namespace diag

#endif // DIAGONALS_UNIPOLY_HPP
