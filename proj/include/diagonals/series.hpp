#ifndef DIAGONALS_SERIES_HPP
#define DIAGONALS_SERIES_HPP

#include <diagonals/bigrat.hpp>
#include <diagonals/unipoly.hpp>

#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace diag {

struct SeriesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroConstantTerm : SeriesError {
  ZeroConstantTerm() : SeriesError("series has zero constant term") {}
};
struct BadConstantTerm : SeriesError {
  explicit BadConstantTerm(const std::string& m) : SeriesError(m) {}
};
struct InnerConstantNonzero : SeriesError {
  InnerConstantNonzero() : SeriesError("inner series has nonzero constant term") {}
};
struct NotReversible : SeriesError {
  NotReversible() : SeriesError("series not reversible (needs a0 = 0, a1 != 0)") {}
};

// Truncated power series over Q. trunc_order() = N means coefficients of
// t^0 .. t^N are known (N+1 of them). Every operation returns the weakest
// truncation of its inputs; truncation is tracked, never assumed.
class TruncSeries {
public:
  TruncSeries() : c_(1, BigRat(0)) {}
  explicit TruncSeries(std::vector<BigRat> coeffs) : c_(std::move(coeffs))
  {
    if (c_.empty()) c_.push_back(BigRat(0));
  }
  TruncSeries(const BigRat& constant, long order) : c_((std::size_t)order + 1, BigRat(0))
  {
    assert(order >= 0);
    c_[0] = constant;
  }

  static TruncSeries identity(long order) // t
  {
    TruncSeries s(BigRat(0), order);
    if (order >= 1) s.c_[1] = 1;
    return s;
  }

  long trunc_order() const { return (long)c_.size() - 1; }
  const std::vector<BigRat>& coeffs() const { return c_; }

  const BigRat& operator[](std::size_t i) const
  {
    static const BigRat zero(0);
    return i < c_.size() ? c_[i] : zero;
  }

  void set_coeff(std::size_t i, const BigRat& v)
  {
    assert(i < c_.size());
    c_[i] = v;
  }

  // truncate to at most `order`; never extends knowledge
  TruncSeries truncated(long order) const
  {
    assert(order >= 0);
    if (order >= trunc_order()) return *this;
    std::vector<BigRat> v(c_.begin(), c_.begin() + order + 1);
    return TruncSeries(std::move(v));
  }

  bool is_zero_series() const
  {
    for (const auto& x : c_)
      if (!is_zero(x)) return false;
    return true;
  }

  // index of first nonzero coefficient; trunc_order()+1 if all zero
  long valuation() const
  {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!is_zero(c_[i])) return (long)i;
    return trunc_order() + 1;
  }

  std::string to_string(const std::string& var = "t", std::size_t max_terms = 8) const;

private:
  std::vector<BigRat> c_;
};

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator-(const TruncSeries& a);
TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
TruncSeries operator*(const TruncSeries& a, const BigRat& s);
inline TruncSeries operator*(const BigRat& s, const TruncSeries& a) { return a * s; }
bool operator==(const TruncSeries& a, const TruncSeries& b);

TruncSeries from_poly(const UniPoly& p, long order);

TruncSeries series_derivative(const TruncSeries& s);            // d/dt, order drops by 1
TruncSeries series_theta(const TruncSeries& s);                 // t d/dt, order kept
TruncSeries series_shift_mul(const TruncSeries& s, long k);     // * t^k
TruncSeries series_inverse(const TruncSeries& s);
TruncSeries series_div(const TruncSeries& a, const TruncSeries& b);
TruncSeries series_exp(const TruncSeries& s);                   // needs a0 = 0
TruncSeries series_log(const TruncSeries& s);                   // needs a0 = 1
TruncSeries series_compose(const TruncSeries& outer, const TruncSeries& inner);
TruncSeries series_reverse(const TruncSeries& s);               // compositional inverse
TruncSeries series_pow_rational(const TruncSeries& s, const BigRat& alpha); // needs a0 = 1
TruncSeries series_subsequence(const TruncSeries& s, long k);   // a_{kn}

// t^rho * sum_l layer[l](t) * ln(t)^l / l!
// Invariant: highest layer nonzero (enforced by normalize_layers).
struct LogSeries {
  BigRat exponent;
  std::vector<TruncSeries> layers;

  LogSeries() : exponent(0) {}
  LogSeries(BigRat rho, std::vector<TruncSeries> ls)
      : exponent(std::move(rho)), layers(std::move(ls))
  {
  }

  int log_power() const
  {
    for (std::size_t i = layers.size(); i-- > 0;)
      if (!layers[i].is_zero_series()) return (int)i;
    return -1; // identically zero
  }

  void normalize_layers()
  {
    while (!layers.empty() && layers.back().is_zero_series())
      layers.pop_back();
  }

  bool is_zero() const { return log_power() < 0; }
};

std::string to_string(const LogSeries& s, std::size_t max_terms = 6);

} // namespace diag

#endif // DIAGONALS_SERIES_HPP
