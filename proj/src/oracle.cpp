#include <diagonals/oracle.hpp>

#include <functional>
#include <unordered_map>

namespace diag {

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<long, long>& p) const
  {
    return std::hash<long>()(p.first * 1000003 + p.second);
  }
};

// T_m(a,b) = constant term of e1(c_1..c_m)^a e2(c_1..c_m)^b over the
// (x+1/x)-measure; recursion splits off one variable
struct CtTables {
  int maxm;
  std::vector<std::unordered_map<std::pair<long, long>, BigInt, PairHash>> memo;

  explicit CtTables(int m) : maxm(m), memo(m + 1) {}

  const BigInt& get(int m, long a, long b)
  {
    static const BigInt zero(0);
    if (a < 0 || b < 0) return zero;
    auto key = std::make_pair(a, b);
    auto it = memo[m].find(key);
    if (it != memo[m].end()) return it->second;
    BigInt val(0);
    if (m == 1) {
      // e1 = c, e2 = 0
      val = b == 0 ? central_ct(a) : BigInt(0);
    } else {
      // e1 = c + E1, e2 = c E1 + E2:
      // e1^a e2^b = sum_{i,j} C(a,i) C(b,j) c^{i+j} E1^{a-i+j} E2^{b-j}
      for (long i = 0; i <= a; ++i)
        for (long j = 0; j <= b; ++j) {
          if ((i + j) % 2) continue;
          BigInt ct = central_ct(i + j);
          if (ct == 0) continue;
          const BigInt& sub = get(m - 1, a - i + j, b - j);
          if (sub == 0) continue;
          val += binomial((unsigned long)a, (unsigned long)i) *
                 binomial((unsigned long)b, (unsigned long)j) * ct * sub;
        }
    }
    auto [pos, inserted] = memo[m].emplace(key, std::move(val));
    return pos->second;
  }
};

} // namespace

std::vector<BigRat> fcc_ct_prefix(int d, long n_terms)
{
  assert(d >= 2);
  CtTables T(d);
  std::vector<BigRat> out(n_terms);
  for (long p = 0; p < n_terms; ++p) out[p] = BigRat(T.get(d, 0, p));
  return out;
}

std::vector<BigRat> guttmann_e3_prefix(long n_terms)
{
  // Odd powers of e3 have no constant term, so the lattice function is even;
  // the returned sequence is the deflated one, u_{2m} as the coefficient of
  // s^m.  u_p = CT[e3(c1..c4)^p]
  //     = sum_k C(p,k) ct(k) sum_j C(k,j) ct(p-k+j) inner2(j)
  // inner2(j) = sum_i C(j,i) ct(p-j+i) ct(p-i)
  std::vector<BigRat> out(n_terms);
  for (long m = 0; m < n_terms; ++m) {
    long p = 2 * m;
    std::vector<BigInt> inner2(p + 1, BigInt(0));
    for (long j = 0; j <= p; ++j) {
      BigInt acc(0);
      for (long i = 0; i <= j; ++i) {
        BigInt c1 = central_ct(p - j + i);
        if (c1 == 0) continue;
        BigInt c2 = central_ct(p - i);
        if (c2 == 0) continue;
        acc += binomial((unsigned long)j, (unsigned long)i) * c1 * c2;
      }
      inner2[j] = acc;
    }
    BigInt total(0);
    for (long k = 0; k <= p; ++k) {
      BigInt ck = central_ct(k);
      if (ck == 0) continue;
      BigInt mid(0);
      for (long j = 0; j <= k; ++j) {
        if (inner2[j] == 0) continue;
        BigInt cj = central_ct(p - k + j);
        if (cj == 0) continue;
        mid += binomial((unsigned long)k, (unsigned long)j) * cj * inner2[j];
      }
      total += binomial((unsigned long)p, (unsigned long)k) * ck * mid;
    }
    out[m] = BigRat(total);
  }
  return out;
}

namespace {

// M_d(p) = sum over compositions of multinomial(p;k)^2, by convolution
std::vector<BigInt> multinomial_squares(int d, long n_terms)
{
  std::vector<BigInt> cur(n_terms, BigInt(1)); // M_1
  for (int level = 2; level <= d; ++level) {
    std::vector<BigInt> next(n_terms, BigInt(0));
    for (long p = 0; p < n_terms; ++p)
      for (long j = 0; j <= p; ++j) {
        BigInt b = binomial((unsigned long)p, (unsigned long)j);
        next[p] += b * b * cur[p - j];
      }
    cur = std::move(next);
  }
  return cur;
}

} // namespace

std::vector<BigRat> sc_lgf_prefix(int d, long n_terms)
{
  auto M = multinomial_squares(d, n_terms);
  std::vector<BigRat> out(n_terms);
  for (long p = 0; p < n_terms; ++p)
    out[p] = BigRat(binomial(2 * (unsigned long)p, (unsigned long)p) * M[p]);
  return out;
}

std::vector<BigRat> diamond_lgf_prefix(int d, long n_terms)
{
  auto M = multinomial_squares(d + 1, n_terms);
  std::vector<BigRat> out(n_terms);
  for (long p = 0; p < n_terms; ++p) out[p] = BigRat(M[p]);
  return out;
}

std::vector<BigRat> b_sweep_prefix(const BigRat& b, long n_terms)
{
  // a_p = sum_{l1,l2,l3 <= p} (4p-s)! s! / (p! prod (p-l_i)! l_i!) b^{l3}
  //     = (1/p!^4) sum_s (4p-s)! s! H(s),
  // H = conv(C(p,.), C(p,.), C(p,.) b^.)
  std::vector<BigRat> out(n_terms);
  for (long p = 0; p < n_terms; ++p) {
    std::vector<BigInt> binom_row(p + 1);
    for (long l = 0; l <= p; ++l) binom_row[l] = binomial((unsigned long)p, (unsigned long)l);
    std::vector<BigInt> f2(2 * p + 1, BigInt(0));
    for (long l1 = 0; l1 <= p; ++l1)
      for (long l2 = 0; l2 <= p; ++l2) f2[l1 + l2] += binom_row[l1] * binom_row[l2];
    std::vector<BigRat> g(p + 1);
    BigRat bp(1);
    for (long l = 0; l <= p; ++l) {
      g[l] = BigRat(binom_row[l]) * bp;
      bp *= b;
    }
    BigRat acc(0);
    for (long s = 0; s <= 3 * p; ++s) {
      BigRat H(0);
      for (long l3 = std::max<long>(0, s - 2 * p); l3 <= std::min<long>(p, s); ++l3)
        H += BigRat(f2[s - l3]) * g[l3];
      if (is_zero(H)) continue;
      acc += BigRat(factorial((unsigned long)(4 * p - s)) * factorial((unsigned long)s)) * H;
    }
    BigRat pf(factorial((unsigned long)p));
    out[p] = acc / (pf * pf * pf * pf);
  }
  return out;
}

BigRat oracle_eval(const CoefficientOracle& o, long n)
{
  if (o.kind == CoefficientOracle::Term) return eval_factorial_term(o.term, n);
  return oracle_prefix(o, n + 1)[n];
}

std::vector<BigRat> oracle_prefix(const CoefficientOracle& o, long n_terms)
{
  if (o.kind == CoefficientOracle::Term) {
    std::vector<BigRat> out(n_terms);
    for (long i = 0; i < n_terms; ++i) out[i] = eval_factorial_term(o.term, i);
    return out;
  }
  auto param = [&](const std::string& k) -> BigRat {
    auto it = o.params.find(k);
    if (it == o.params.end()) throw std::runtime_error("oracle parameter missing: " + k);
    return it->second;
  };
  if (o.native_name == "fcc_ct") return fcc_ct_prefix((int)to_long(param("d")), n_terms);
  if (o.native_name == "guttmann_e3") return guttmann_e3_prefix(n_terms);
  if (o.native_name == "sc_lgf") return sc_lgf_prefix((int)to_long(param("d")), n_terms);
  if (o.native_name == "diamond_lgf") return diamond_lgf_prefix((int)to_long(param("d")), n_terms);
  if (o.native_name == "b_sweep") return b_sweep_prefix(param("b"), n_terms);
  throw std::runtime_error("unknown native oracle: " + o.native_name);
}

} // namespace diag
