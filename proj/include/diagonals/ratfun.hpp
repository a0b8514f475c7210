#ifndef DIAGONALS_RATFUN_HPP
#define DIAGONALS_RATFUN_HPP

#include <diagonals/unipoly.hpp>

#include <string>

namespace diag {

// rational function num/den over Q, den never zero, normalized so that
// gcd(num, den) = 1 and den is primitive with positive leading coefficient
class RatFun {
public:
  RatFun() : num_(), den_(BigRat(1)) {}
  RatFun(UniPoly n, UniPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
  explicit RatFun(UniPoly n) : num_(std::move(n)), den_(BigRat(1)) {}
  explicit RatFun(const BigRat& c) : num_(UniPoly(c)), den_(BigRat(1)) {}

  const UniPoly& num() const { return num_; }
  const UniPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero_poly(); }
  bool is_poly() const { return den_.degree() == 0; }
  // only valid when is_poly()
  UniPoly as_poly() const { return num_ * (BigRat(1) / den_[0]); }

  friend RatFun operator+(const RatFun& a, const RatFun& b)
  {
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b)
  {
    return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a) { RatFun r = a; r.num_ = -r.num_; return r; }
  friend RatFun operator*(const RatFun& a, const RatFun& b)
  {
    return RatFun(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b)
  {
    assert(!b.is_zero());
    return RatFun(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend bool operator==(const RatFun& a, const RatFun& b)
  {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFun derivative() const
  {
    return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  std::string to_string(const std::string& var = "t") const
  {
    if (is_poly()) return as_poly().to_string(var);
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
  }

private:
  void normalize()
  {
    assert(!den_.is_zero_poly());
    if (num_.is_zero_poly()) {
      den_ = UniPoly(BigRat(1));
      return;
    }
    UniPoly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      UniPoly q, r;
      UniPoly::divmod(num_, g, q, r);
      num_ = q;
      UniPoly::divmod(den_, g, q, r);
      den_ = q;
    }
    // scale so den is primitive with positive leading coefficient
    UniPoly dprim = primitive_part(den_);
    BigRat s = den_.leading() / dprim.leading();
    den_ = dprim;
    num_ = num_ * (BigRat(1) / s);
  }

  UniPoly num_, den_;
};

} // namespace diag

#endif // DIAGONALS_RATFUN_HPP
