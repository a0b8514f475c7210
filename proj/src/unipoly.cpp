#include <diagonals/unipoly.hpp>

#include <map>
#include <sstream>

namespace diag {

std::string UniPoly::to_string(const std::string& var) const
{
  if (is_zero_poly()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const BigRat& a = c_[i];
    if (is_zero(a)) continue;
    BigRat mag = abs(a);
    if (first) {
      if (sgn(a) < 0) os << "-";
      first = false;
    } else {
      os << (sgn(a) < 0 ? " - " : " + ");
    }
    bool unit = (mag == 1) && i > 0;
    if (!unit) os << diag::to_string(mag);
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

UniPoly primitive_part(const UniPoly& p)
{
  if (p.is_zero_poly()) return p;
  BigInt denlcm(1);
  for (const auto& c : p.coeffs())
    mpz_lcm(denlcm.get_mpz_t(), denlcm.get_mpz_t(), c.get_den_mpz_t());
  BigInt g(0);
  for (const auto& c : p.coeffs()) {
    BigRat ci = c * BigRat(denlcm);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ci.get_num_mpz_t());
  }
  if (g == 0) g = 1;
  BigRat scale = BigRat(denlcm) / BigRat(g);
  if (sgn(p.leading()) < 0) scale = -scale;
  return p * scale;
}

UniPoly poly_gcd(const UniPoly& a, const UniPoly& b)
{
  UniPoly x = primitive_part(a), y = primitive_part(b);
  if (x.is_zero_poly()) return y;
  if (y.is_zero_poly()) return x;
  while (!y.is_zero_poly()) {
    UniPoly q, r;
    UniPoly::divmod(x, y, q, r);
    x = y;
    y = primitive_part(r);
  }
  return primitive_part(x);
}

UniPoly square_free_part(const UniPoly& p)
{
  if (p.degree() <= 0) return UniPoly(BigRat(1));
  UniPoly g = poly_gcd(p, p.derivative());
  if (g.degree() <= 0) return primitive_part(p);
  UniPoly q, r;
  UniPoly::divmod(p, g, q, r);
  return primitive_part(q);
}

namespace {

std::vector<BigInt> divisors_bounded(BigInt n, std::size_t cap)
{
  // divisors of |n| via trial division; gives up (returns what it has)
  // when the cofactor resists small factors
  n = abs(n);
  std::vector<std::pair<BigInt, int>> fac;
  if (n == 0) return {};
  for (BigInt d(2); d * d <= n && d < 2000000; ++d) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      fac.emplace_back(d, e);
    }
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 25))
      fac.emplace_back(n, 1);
    else
      fac.emplace_back(n, 1); // composite leftover: treated as one block
  }
  std::vector<BigInt> divs{BigInt(1)};
  for (const auto& [pr, e] : fac) {
    std::size_t sz = divs.size();
    BigInt pw(1);
    for (int k = 1; k <= e; ++k) {
      pw *= pr;
      for (std::size_t i = 0; i < sz; ++i) {
        divs.push_back(divs[i] * pw);
        if (divs.size() > cap) return divs;
      }
    }
  }
  return divs;
}

} // namespace

std::vector<BigRat> rational_roots(const UniPoly& p)
{
  std::vector<BigRat> out;
  if (p.is_zero_poly()) return out;
  UniPoly q = primitive_part(p);
  std::size_t v = q.valuation();
  if (v > 0) {
    out.push_back(BigRat(0));
    std::vector<BigRat> shifted(q.coeffs().begin() + v, q.coeffs().end());
    q = UniPoly(std::move(shifted));
  }
  if (q.degree() <= 0) return out;
  BigInt a0 = num(q[0]);
  BigInt an = num(q.leading());
  auto ds0 = divisors_bounded(a0, 4096);
  auto dsn = divisors_bounded(an, 4096);
  for (const auto& pnum : ds0)
    for (const auto& pden : dsn) {
      for (int s = 0; s < 2; ++s) {
        BigRat cand = BigRat(s ? -pnum : pnum) / BigRat(pden);
        cand.canonicalize();
        if (is_zero(q.eval(cand))) {
          bool seen = false;
          for (const auto& r : out)
            if (r == cand) { seen = true; break; }
          if (!seen) out.push_back(cand);
        }
      }
    }
  return out;
}

RootData rational_roots_with_multiplicity(const UniPoly& p)
{
  RootData rd;
  UniPoly q = primitive_part(p);
  auto roots = rational_roots(q);
  for (const auto& r : roots) {
    int m = 0;
    UniPoly lin(std::vector<BigRat>{-r, BigRat(1)});
    for (;;) {
      UniPoly quo, rem;
      UniPoly::divmod(q, lin, quo, rem);
      if (!rem.is_zero_poly()) break;
      q = quo;
      ++m;
    }
    rd.roots.emplace_back(r, m);
  }
  rd.rootless_cofactor = primitive_part(q);
  return rd;
}

} // namespace diag
