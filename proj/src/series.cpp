#include <diagonals/series.hpp>

#include <sstream>

namespace diag {

namespace {
long min_order(const TruncSeries& a, const TruncSeries& b)
{
  return std::min(a.trunc_order(), b.trunc_order());
}
} // namespace

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b)
{
  long n = min_order(a, b);
  std::vector<BigRat> r(n + 1);
  for (long i = 0; i <= n; ++i) r[i] = a[i] + b[i];
  return TruncSeries(std::move(r));
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b)
{
  long n = min_order(a, b);
  std::vector<BigRat> r(n + 1);
  for (long i = 0; i <= n; ++i) r[i] = a[i] - b[i];
  return TruncSeries(std::move(r));
}

TruncSeries operator-(const TruncSeries& a)
{
  std::vector<BigRat> r(a.coeffs());
  for (auto& x : r) x = -x;
  return TruncSeries(std::move(r));
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b)
{
  long n = min_order(a, b);
  std::vector<BigRat> r(n + 1, BigRat(0));
  for (long i = 0; i <= n; ++i) {
    if (is_zero(a[i])) continue;
    for (long j = 0; i + j <= n; ++j) {
      if (is_zero(b[j])) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return TruncSeries(std::move(r));
}

TruncSeries operator*(const TruncSeries& a, const BigRat& s)
{
  std::vector<BigRat> r(a.coeffs());
  for (auto& x : r) x *= s;
  return TruncSeries(std::move(r));
}

bool operator==(const TruncSeries& a, const TruncSeries& b)
{
  long n = min_order(a, b);
  for (long i = 0; i <= n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

TruncSeries from_poly(const UniPoly& p, long order)
{
  std::vector<BigRat> r(order + 1, BigRat(0));
  for (long i = 0; i <= order && i <= p.degree(); ++i) r[i] = p[i];
  return TruncSeries(std::move(r));
}

TruncSeries series_derivative(const TruncSeries& s)
{
  long n = s.trunc_order();
  if (n == 0) return TruncSeries(std::vector<BigRat>{BigRat(0)});
  std::vector<BigRat> r(n);
  for (long i = 1; i <= n; ++i) r[i - 1] = s[i] * BigRat(i);
  return TruncSeries(std::move(r));
}

TruncSeries series_theta(const TruncSeries& s)
{
  std::vector<BigRat> r(s.coeffs());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= BigRat((long)i);
  return TruncSeries(std::move(r));
}

TruncSeries series_shift_mul(const TruncSeries& s, long k)
{
  assert(k >= 0);
  std::vector<BigRat> r(s.trunc_order() + 1, BigRat(0));
  for (long i = 0; i + k <= s.trunc_order(); ++i) r[i + k] = s[i];
  return TruncSeries(std::move(r));
}

TruncSeries series_inverse(const TruncSeries& s)
{
  if (is_zero(s[0])) throw ZeroConstantTerm();
  long n = s.trunc_order();
  std::vector<BigRat> r(n + 1, BigRat(0));
  r[0] = 1 / s[0];
  for (long k = 1; k <= n; ++k) {
    BigRat acc(0);
    for (long j = 1; j <= k; ++j) acc += s[j] * r[k - j];
    r[k] = -acc / s[0];
  }
  return TruncSeries(std::move(r));
}

TruncSeries series_div(const TruncSeries& a, const TruncSeries& b)
{
  return (a * series_inverse(b)).truncated(min_order(a, b));
}

TruncSeries series_exp(const TruncSeries& s)
{
  if (!is_zero(s[0])) throw BadConstantTerm("exp needs zero constant term");
  long n = s.trunc_order();
  // E' = s' E, coefficient recurrence
  std::vector<BigRat> r(n + 1, BigRat(0));
  r[0] = 1;
  for (long k = 1; k <= n; ++k) {
    BigRat acc(0);
    for (long j = 1; j <= k; ++j) acc += BigRat(j) * s[j] * r[k - j];
    r[k] = acc / BigRat(k);
  }
  return TruncSeries(std::move(r));
}

TruncSeries series_log(const TruncSeries& s)
{
  if (s[0] != 1) throw BadConstantTerm("log needs constant term 1");
  long n = s.trunc_order();
  // L' = s'/s; integrate
  TruncSeries num = series_derivative(s);
  TruncSeries den = s.truncated(std::max<long>(n - 1, 0));
  TruncSeries q = num * series_inverse(den);
  std::vector<BigRat> r(n + 1, BigRat(0));
  for (long k = 1; k <= n; ++k) r[k] = q[k - 1] / BigRat(k);
  return TruncSeries(std::move(r));
}

TruncSeries series_compose(const TruncSeries& outer, const TruncSeries& inner)
{
  if (!is_zero(inner[0])) throw InnerConstantNonzero();
  long n = std::min(outer.trunc_order(), inner.trunc_order());
  // Horner on outer coefficients
  TruncSeries in = inner.truncated(n);
  TruncSeries acc(BigRat(0), n);
  for (long i = std::min<long>(outer.trunc_order(), n); i >= 0; --i) {
    acc = acc * in;
    std::vector<BigRat> v(acc.coeffs());
    v[0] += outer[i];
    acc = TruncSeries(std::move(v));
  }
  return acc;
}

TruncSeries series_reverse(const TruncSeries& s)
{
  if (!is_zero(s[0]) || is_zero(s[1])) throw NotReversible();
  long n = s.trunc_order();
  // Newton iteration on g -> g - (s(g) - t)/s'(g), doubling precision;
  // quadratic fallback is the k = prec+1 tail of the same loop.
  TruncSeries g(BigRat(0), n);
  if (n >= 1) {
    std::vector<BigRat> v(g.coeffs());
    v[1] = 1 / s[1];
    g = TruncSeries(std::move(v));
  }
  long prec = 1;
  TruncSeries ds = series_derivative(s);
  while (prec < n) {
    prec = std::min(n, 2 * prec + 1);
    TruncSeries comp = series_compose(s, g);
    TruncSeries err = comp - TruncSeries::identity(n);
    // err has valuation >= 2, so err/t keeps full knowledge at order n-1
    std::vector<BigRat> ev(err.coeffs().begin() + 1, err.coeffs().end());
    TruncSeries err_over_t(std::move(ev));
    TruncSeries dcomp = series_compose(ds, g.truncated(std::max<long>(n - 1, 0)));
    TruncSeries corr = err_over_t * series_inverse(dcomp); // known to n-1
    std::vector<BigRat> v(g.coeffs());
    for (long i = 0; i <= corr.trunc_order() && i + 1 <= n; ++i) v[i + 1] -= corr[i];
    g = TruncSeries(std::move(v));
  }
  return g;
}

TruncSeries series_pow_rational(const TruncSeries& s, const BigRat& alpha)
{
  if (s[0] != 1) throw BadConstantTerm("pow needs constant term 1");
  long n = s.trunc_order();
  // (s^a)' s = a s' s^a
  std::vector<BigRat> r(n + 1, BigRat(0));
  r[0] = 1;
  for (long k = 1; k <= n; ++k) {
    BigRat acc(0);
    for (long j = 1; j <= k; ++j)
      acc += (alpha * BigRat(j) - BigRat(k - j)) * s[j] * r[k - j];
    r[k] = acc / BigRat(k);
  }
  return TruncSeries(std::move(r));
}

TruncSeries series_subsequence(const TruncSeries& s, long k)
{
  assert(k >= 1);
  long n = s.trunc_order() / k;
  std::vector<BigRat> r(n + 1);
  for (long i = 0; i <= n; ++i) r[i] = s[i * k];
  return TruncSeries(std::move(r));
}

std::string TruncSeries::to_string(const std::string& var, std::size_t max_terms) const
{
  std::ostringstream os;
  std::size_t shown = 0;
  bool first = true;
  for (std::size_t i = 0; i < c_.size() && shown < max_terms; ++i) {
    if (is_zero(c_[i])) continue;
    BigRat mag = abs(c_[i]);
    if (first) {
      if (sgn(c_[i]) < 0) os << "-";
      first = false;
    } else
      os << (sgn(c_[i]) < 0 ? " - " : " + ");
    bool unit = (mag == 1) && i > 0;
    if (!unit) os << diag::to_string(mag);
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
    ++shown;
  }
  if (first) os << "0";
  os << " + O(" << var << "^" << c_.size() << ")";
  return os.str();
}

std::string to_string(const LogSeries& s, std::size_t max_terms)
{
  std::ostringstream os;
  bool first = true;
  for (std::size_t l = s.layers.size(); l-- > 0;) {
    if (s.layers[l].is_zero_series()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << s.layers[l].to_string("t", max_terms) << ")";
    if (!is_zero(s.exponent)) os << "*t^(" << to_string(s.exponent) << ")";
    if (l >= 1) {
      os << "*ln(t)";
      if (l >= 2) os << "^" << l;
      if (l >= 2) os << "/" << to_string(BigRat(factorial(l)));
    }
  }
  if (first) os << "0";
  return os.str();
}

} // namespace diag
