#ifndef DIAGONALS_DIFFOP_HPP
#define DIAGONALS_DIFFOP_HPP

#include <diagonals/ratfun.hpp>
#include <diagonals/series.hpp>
#include <diagonals/unipoly.hpp>

#include <string>
#include <vector>

namespace diag {

// Linear differential operator sum_i a_i(t) D^i with D = d/dt, a_r != 0.
// normalize() clears rational content so the coefficients are coprime integer
// polynomials with positive leading coefficient of a_r; equality is
// coefficient-wise after normalization.
class DiffOp {
public:
  DiffOp() = default;
  explicit DiffOp(std::vector<UniPoly> coeffs) : a_(std::move(coeffs)) { trim(); }

  static DiffOp derivation() // D
  {
    return DiffOp(std::vector<UniPoly>{UniPoly(), UniPoly(BigRat(1))});
  }
  static DiffOp identity()
  {
    return DiffOp(std::vector<UniPoly>{UniPoly(BigRat(1))});
  }
  static DiffOp theta() // t*D
  {
    return DiffOp(std::vector<UniPoly>{UniPoly(), UniPoly::monomial(BigRat(1), 1)});
  }

  bool is_zero_op() const { return a_.empty(); }
  // order of the zero operator reported as -1
  long order() const { return (long)a_.size() - 1; }
  const std::vector<UniPoly>& coeffs() const { return a_; }
  const UniPoly& coeff(std::size_t i) const
  {
    static const UniPoly zero;
    return i < a_.size() ? a_[i] : zero;
  }
  const UniPoly& leading() const { return a_.back(); }

  long max_degree() const
  {
    long d = 0;
    for (const auto& p : a_) d = std::max(d, p.degree());
    return d;
  }

  DiffOp& normalize();

  friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b); // composition a∘b
  friend DiffOp operator*(const UniPoly& p, const DiffOp& b);
  friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.a_ == b.a_; }

  std::string to_string(const std::string& var = "t") const;

private:
  void trim()
  {
    while (!a_.empty() && a_.back().is_zero_poly()) a_.pop_back();
  }
  std::vector<UniPoly> a_;
};

// exact application; order-r operator applied to N known terms leaves N-r
// trustworthy terms
TruncSeries apply_op(const DiffOp& L, const TruncSeries& s);

// D acts on t^rho ln^l t layers with the standard coupling
LogSeries apply_op(const DiffOp& L, const LogSeries& s);

DiffOp adjoint(const DiffOp& L); // sum (-D)^i a_i(t)

// Ore operators with rational-function coefficients; used where exact
// division lives naturally in Q(t)
class RatOp {
public:
  RatOp() = default;
  explicit RatOp(std::vector<RatFun> c) : c_(std::move(c)) { trim(); }
  explicit RatOp(const DiffOp& L)
  {
    for (const auto& p : L.coeffs()) c_.emplace_back(p);
    trim();
  }

  long order() const { return (long)c_.size() - 1; }
  bool is_zero_op() const { return c_.empty(); }
  const std::vector<RatFun>& coeffs() const { return c_; }
  const RatFun& coeff(std::size_t i) const
  {
    static const RatFun zero;
    return i < c_.size() ? c_[i] : zero;
  }

  // clears denominators: returns primitive polynomial operator d*this
  DiffOp cleared() const;

  friend RatOp operator+(const RatOp& a, const RatOp& b);
  friend RatOp operator-(const RatOp& a, const RatOp& b);
  friend RatOp operator*(const RatOp& a, const RatOp& b);
  friend RatOp operator*(const RatFun& f, const RatOp& b);
  friend bool operator==(const RatOp& a, const RatOp& b) { return a.c_ == b.c_; }

private:
  void trim()
  {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<RatFun> c_;
};

// Exact Ore right division over Q(t): L = quotient * R + remainder,
// order(remainder) < order(R). Reconstruction is exact in RatOp arithmetic.
struct RightDivision {
  RatOp quotient;
  RatOp remainder;
};
RightDivision right_divide(const DiffOp& L, const DiffOp& R);

inline bool right_divides(const DiffOp& R, const DiffOp& L)
{
  return right_divide(L, R).remainder.is_zero_op();
}

// theta-form: L = t^shift * sum_j q_j(t) theta^j with theta = t*D
struct ThetaForm {
  long shift = 0;
  std::vector<UniPoly> q; // q[j] multiplies theta^j

  long order() const { return (long)q.size() - 1; }
  // P_k(theta) view: the theta-polynomial multiplying t^(k+shift)
  UniPoly theta_poly_at(long k) const;
  std::string to_string() const;
};

ThetaForm theta_form(const DiffOp& L);
DiffOp from_theta_form(const ThetaForm& T);

// operator transforms (exact): if L annihilates f(t), the result annihilates
// f(c t), f(t + c), f(1/t) respectively
DiffOp op_scale(const DiffOp& L, const BigRat& c);
DiffOp op_translate(const DiffOp& L, const BigRat& c);
DiffOp op_at_infinity(const DiffOp& L);

// conjugation by g = prod_i r_i(t)^{gamma_i}: returns g^{-1} L g cleared to
// polynomial coefficients; annihilates f/g whenever L annihilates f
DiffOp conjugate_by_power_product(const DiffOp& L,
                                  const std::vector<std::pair<UniPoly, BigRat>>& gauge);

// serialization (docs/formats.md): JSON text with order, theta flag,
// integer coefficient strings
std::string op_to_json(const DiffOp& L, bool as_theta_form);
DiffOp op_from_json(const std::string& text);

} // namespace diag

#endif // DIAGONALS_DIFFOP_HPP
