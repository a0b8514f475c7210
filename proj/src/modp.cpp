#include <diagonals/modp.hpp>

namespace diag {

std::vector<std::uint64_t> guessing_primes(std::size_t count, std::size_t skip)
{
  std::vector<std::uint64_t> out;
  BigInt p = (BigInt(1) << 61);
  std::size_t skipped = 0;
  while (out.size() < count) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (skipped < skip) {
      ++skipped;
      continue;
    }
    out.push_back(p.get_ui());
  }
  return out;
}

std::vector<std::size_t> rref_mod_p(MatModP& m, const PrimeField& F)
{
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t sel = row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols; ++j)
        std::swap(m.at(sel, j), m.at(row, j));
    std::uint64_t ipiv = F.inv(m.at(row, col));
    for (std::size_t j = col; j < m.cols; ++j)
      m.at(row, j) = F.mul(m.at(row, j), ipiv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == row) continue;
      std::uint64_t f = m.at(i, col);
      if (!f) continue;
      for (std::size_t j = col; j < m.cols; ++j)
        m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::vector<std::uint64_t>> nullspace_mod_p(MatModP m, const PrimeField& F)
{
  auto pivots = rref_mod_p(m, F);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint64_t> v(m.cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = F.neg(m.at(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank_mod_p(MatModP m, const PrimeField& F)
{
  return rref_mod_p(m, F).size();
}

BigInt crt_combine(const std::vector<std::uint64_t>& residues,
                   const std::vector<std::uint64_t>& primes)
{
  BigInt x(0), mod(1);
  for (std::size_t i = 0; i < residues.size(); ++i) {
    BigInt p((unsigned long)primes[i]);
    BigInt r((unsigned long)residues[i]);
    // x' = x + mod * ((r - x) / mod mod p)
    BigInt minv;
    BigInt mm = mod % p;
    if (mpz_invert(minv.get_mpz_t(), mm.get_mpz_t(), p.get_mpz_t()) == 0)
      throw BadPrime("duplicate prime in CRT");
    BigInt diff = ((r - x) % p + p) % p;
    BigInt k = diff * minv % p;
    x += mod * k;
    mod *= p;
  }
  return x;
}

std::optional<BigRat> rational_reconstruct(const BigInt& x, const BigInt& m)
{
  // half-extended Euclid: find num/den = x mod m with |num|, |den| <= sqrt(m/2)
  BigInt bound;
  mpz_sqrt(bound.get_mpz_t(), BigInt(m / 2).get_mpz_t());
  BigInt r0 = m, r1 = ((x % m) + m) % m;
  BigInt t0(0), t1(1);
  while (r1 > bound) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    BigInt t2 = t0 - q * t1;
    r0 = r1; r1 = r2;
    t0 = t1; t1 = t2;
  }
  if (t1 == 0) return std::nullopt;
  BigInt den = t1, nume = r1;
  if (den < 0) { den = -den; nume = -nume; }
  if (den > bound) return std::nullopt;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), nume.get_mpz_t(), den.get_mpz_t());
  BigInt gm;
  mpz_gcd(gm.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  if (gm != 1) return std::nullopt;
  BigRat out(nume, den);
  out.canonicalize();
  return out;
}

} // namespace diag
