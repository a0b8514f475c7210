#include <diagonals/diffop.hpp>

#include <json.hpp>

#include <map>
#include <sstream>

namespace diag {

DiffOp& DiffOp::normalize()
{
  trim();
  if (a_.empty()) return *this;
  BigInt denlcm(1);
  for (const auto& p : a_)
    for (const auto& c : p.coeffs())
      mpz_lcm(denlcm.get_mpz_t(), denlcm.get_mpz_t(), c.get_den_mpz_t());
  BigInt g(0);
  for (const auto& p : a_)
    for (const auto& c : p.coeffs()) {
      BigRat ci = c * BigRat(denlcm);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ci.get_num_mpz_t());
    }
  if (g == 0) g = 1;
  BigRat scale = BigRat(denlcm) / BigRat(g);
  if (sgn(a_.back().leading()) < 0) scale = -scale;
  for (auto& p : a_) p = p * scale;
  return *this;
}

DiffOp operator+(const DiffOp& a, const DiffOp& b)
{
  std::vector<UniPoly> r(std::max(a.a_.size(), b.a_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
  return DiffOp(std::move(r));
}

DiffOp operator-(const DiffOp& a, const DiffOp& b)
{
  std::vector<UniPoly> r(std::max(a.a_.size(), b.a_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
  return DiffOp(std::move(r));
}

DiffOp operator*(const DiffOp& a, const DiffOp& b)
{
  if (a.is_zero_op() || b.is_zero_op()) return DiffOp();
  std::vector<UniPoly> r(a.a_.size() + b.a_.size() - 1);
  // D^i ∘ g = sum_k C(i,k) g^(k) D^(i-k)
  for (std::size_t i = 0; i < a.a_.size(); ++i) {
    if (a.a_[i].is_zero_poly()) continue;
    for (std::size_t j = 0; j < b.a_.size(); ++j) {
      if (b.a_[j].is_zero_poly()) continue;
      UniPoly gk = b.a_[j];
      for (std::size_t k = 0; k <= i; ++k) {
        BigRat binom(binomial((unsigned long)i, (unsigned long)k));
        r[i - k + j] += a.a_[i] * gk * binom;
        if (k < i) gk = gk.derivative();
      }
    }
  }
  return DiffOp(std::move(r));
}

DiffOp operator*(const UniPoly& p, const DiffOp& b)
{
  std::vector<UniPoly> r(b.a_);
  for (auto& x : r) x = p * x;
  return DiffOp(std::move(r));
}

std::string DiffOp::to_string(const std::string& var) const
{
  if (is_zero_op()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = a_.size(); i-- > 0;) {
    if (a_[i].is_zero_poly()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << a_[i].to_string(var) << ")";
    if (i >= 1) {
      os << "*D";
      if (i >= 2) os << "^" << i;
    }
  }
  return os.str();
}

TruncSeries apply_op(const DiffOp& L, const TruncSeries& s)
{
  long r = std::max<long>(L.order(), 0);
  long out_order = std::max<long>(s.trunc_order() - r, 0);
  TruncSeries acc(BigRat(0), out_order);
  TruncSeries d = s;
  for (long i = 0; i <= L.order(); ++i) {
    if (!L.coeff(i).is_zero_poly()) {
      TruncSeries term = from_poly(L.coeff(i), out_order) * d.truncated(out_order);
      acc = acc + term;
    }
    if (i < L.order()) d = series_derivative(d);
  }
  return acc;
}

LogSeries apply_op(const DiffOp& L, const LogSeries& s)
{
  ThetaForm T = theta_form(L);
  const BigRat& rho = s.exponent;
  long n = 0;
  for (const auto& l : s.layers) n = std::max(n, l.trunc_order());

  // theta acting on layer vector: new[l] = (theta + rho) c_l + c_{l+1}
  auto theta_step = [&](const std::vector<TruncSeries>& v) {
    std::vector<TruncSeries> out(v.size());
    for (std::size_t l = 0; l < v.size(); ++l) {
      TruncSeries t1 = series_theta(v[l]) + v[l] * rho;
      if (l + 1 < v.size()) t1 = t1 + v[l + 1];
      out[l] = t1;
    }
    return out;
  };

  std::vector<TruncSeries> cur(s.layers);
  if (cur.empty()) cur.push_back(TruncSeries(BigRat(0), n));
  std::vector<TruncSeries> acc(cur.size(), TruncSeries(BigRat(0), n));
  for (long j = 0; j <= T.order(); ++j) {
    if (!T.q[j].is_zero_poly()) {
      for (std::size_t l = 0; l < cur.size(); ++l)
        acc[l] = acc[l] + from_poly(T.q[j], n) * cur[l];
    }
    if (j < T.order()) cur = theta_step(cur);
  }
  LogSeries out;
  out.exponent = rho + BigRat(T.shift);
  out.layers = std::move(acc);
  return out;
}

DiffOp adjoint(const DiffOp& L)
{
  DiffOp acc;
  DiffOp Dpow = DiffOp::identity();
  for (long i = 0; i <= L.order(); ++i) {
    if (!L.coeff(i).is_zero_poly()) {
      DiffOp mult(std::vector<UniPoly>{L.coeff(i)});
      DiffOp term = Dpow * mult;
      if (i % 2 == 1) term = DiffOp() - term;
      acc = acc + term;
    }
    if (i < L.order()) Dpow = DiffOp::derivation() * Dpow;
  }
  return acc.normalize();
}

DiffOp RatOp::cleared() const
{
  UniPoly denlcm(BigRat(1));
  for (const auto& f : c_) {
    UniPoly g = poly_gcd(denlcm, f.den());
    UniPoly q, r;
    UniPoly::divmod(f.den(), g, q, r);
    denlcm = denlcm * q;
  }
  std::vector<UniPoly> coeffs;
  for (const auto& f : c_) {
    UniPoly q, r;
    UniPoly::divmod(denlcm, f.den(), q, r);
    coeffs.push_back(f.num() * q);
  }
  DiffOp out(std::move(coeffs));
  return out.normalize();
}

RatOp operator+(const RatOp& a, const RatOp& b)
{
  std::vector<RatFun> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
  return RatOp(std::move(r));
}

RatOp operator-(const RatOp& a, const RatOp& b)
{
  std::vector<RatFun> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
  return RatOp(std::move(r));
}

RatOp operator*(const RatOp& a, const RatOp& b)
{
  if (a.is_zero_op() || b.is_zero_op()) return RatOp();
  std::vector<RatFun> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j].is_zero()) continue;
      RatFun gk = b.c_[j];
      for (std::size_t k = 0; k <= i; ++k) {
        RatFun binom(BigRat(binomial((unsigned long)i, (unsigned long)k)));
        r[i - k + j] = r[i - k + j] + a.c_[i] * binom * gk;
        if (k < i) gk = gk.derivative();
      }
    }
  }
  return RatOp(std::move(r));
}

RatOp operator*(const RatFun& f, const RatOp& b)
{
  std::vector<RatFun> r(b.c_);
  for (auto& x : r) x = f * x;
  return RatOp(std::move(r));
}

RightDivision right_divide(const DiffOp& L, const DiffOp& R)
{
  assert(R.order() >= 1);
  RatOp rem(L);
  RatOp quot;
  RatOp Rr(R);
  while (rem.order() >= R.order()) {
    long k = rem.order() - R.order();
    RatFun f = rem.coeffs().back() / Rr.coeffs().back();
    std::vector<RatFun> mono(k + 1);
    mono[k] = f;
    RatOp m(std::move(mono));
    quot = quot + m;
    rem = rem - m * Rr;
  }
  return RightDivision{quot, rem};
}

namespace {

// falling factorial theta(theta-1)...(theta-i+1) as polynomial in theta
std::vector<UniPoly> falling_factorials(long max_i)
{
  std::vector<UniPoly> f(max_i + 1);
  f[0] = UniPoly(BigRat(1));
  for (long i = 1; i <= max_i; ++i)
    f[i] = f[i - 1] * UniPoly(std::vector<BigRat>{BigRat(-(i - 1)), BigRat(1)});
  return f;
}

// Stirling numbers of the second kind S(j,i)
std::vector<std::vector<BigInt>> stirling2(long max_j)
{
  std::vector<std::vector<BigInt>> S(max_j + 1, std::vector<BigInt>(max_j + 1, BigInt(0)));
  S[0][0] = 1;
  for (long j = 1; j <= max_j; ++j)
    for (long i = 1; i <= j; ++i)
      S[j][i] = BigInt((long)i) * S[j - 1][i] + S[j - 1][i - 1];
  return S;
}

} // namespace

ThetaForm theta_form(const DiffOp& L)
{
  ThetaForm T;
  long r = L.order();
  if (r < 0) return T;
  auto ff = falling_factorials(r);
  // t^r L = sum_i a_i(t) t^{r-i} ff_i(theta)
  std::vector<UniPoly> q(r + 1); // q[j](t) multiplies theta^j
  for (long i = 0; i <= r; ++i) {
    if (L.coeff(i).is_zero_poly()) continue;
    UniPoly ai_t = L.coeff(i) * UniPoly::monomial(BigRat(1), r - i);
    for (long j = 0; j <= ff[i].degree(); ++j)
      if (!is_zero(ff[i][j])) q[j] += ai_t * ff[i][j];
  }
  long v = -1;
  for (const auto& p : q)
    if (!p.is_zero_poly())
      v = v < 0 ? (long)p.valuation() : std::min(v, (long)p.valuation());
  if (v < 0) v = 0;
  for (auto& p : q) {
    if (p.is_zero_poly()) continue;
    std::vector<BigRat> c(p.coeffs().begin() + v, p.coeffs().end());
    p = UniPoly(std::move(c));
  }
  T.shift = v - r;
  T.q = std::move(q);
  while (!T.q.empty() && T.q.back().is_zero_poly()) T.q.pop_back();
  return T;
}

UniPoly ThetaForm::theta_poly_at(long k) const
{
  std::vector<BigRat> c;
  for (const auto& p : q) c.push_back(p[k]);
  return UniPoly(std::move(c));
}

std::string ThetaForm::to_string() const
{
  std::ostringstream os;
  long maxk = 0;
  for (const auto& p : q) maxk = std::max(maxk, p.degree());
  bool first = true;
  for (long k = 0; k <= maxk; ++k) {
    UniPoly pk = theta_poly_at(k);
    if (pk.is_zero_poly()) continue;
    if (!first) os << " + ";
    first = false;
    long tp = k + shift;
    if (tp != 0) os << "t^" << tp << "*";
    os << "(" << pk.to_string("th") << ")";
  }
  return os.str();
}

DiffOp from_theta_form(const ThetaForm& T)
{
  long rj = T.order();
  if (rj < 0) return DiffOp();
  auto S = stirling2(rj);
  // first build with Laurent bookkeeping: coefficient of D^i is
  // t^{i+shift} * sum_j q_j(t) S(j,i)
  std::vector<UniPoly> body(rj + 1);
  for (long i = 0; i <= rj; ++i)
    for (long j = i; j <= rj; ++j)
      if (S[j][i] != 0) body[i] += T.q[j] * BigRat(S[j][i]);
  long minexp = 0;
  for (long i = 0; i <= rj; ++i) {
    if (body[i].is_zero_poly()) continue;
    minexp = std::min(minexp, (long)body[i].valuation() + i + T.shift);
  }
  long lift = minexp < 0 ? -minexp : 0;
  std::vector<UniPoly> out(rj + 1);
  for (long i = 0; i <= rj; ++i) {
    if (body[i].is_zero_poly()) continue;
    long e = i + T.shift + lift;
    assert(e + (long)body[i].valuation() >= 0);
    if (e >= 0)
      out[i] = body[i] * UniPoly::monomial(BigRat(1), e);
    else {
      std::vector<BigRat> c(body[i].coeffs().begin() + (-e), body[i].coeffs().end());
      for (long k = 0; k < -e; ++k) assert(is_zero(body[i][k]));
      out[i] = UniPoly(std::move(c));
    }
  }
  // strip any common t-power so the minimal polynomial representative
  // is returned
  long minval = -1;
  for (const auto& p : out)
    if (!p.is_zero_poly())
      minval = minval < 0 ? (long)p.valuation() : std::min(minval, (long)p.valuation());
  if (minval > 0)
    for (auto& p : out) {
      if (p.is_zero_poly()) continue;
      std::vector<BigRat> c(p.coeffs().begin() + minval, p.coeffs().end());
      p = UniPoly(std::move(c));
    }
  DiffOp r(std::move(out));
  return r.normalize();
}

DiffOp op_scale(const DiffOp& L, const BigRat& c)
{
  assert(!is_zero(c));
  std::vector<UniPoly> r(L.order() + 1);
  for (long i = 0; i <= L.order(); ++i)
    r[i] = L.coeff(i).scaled(c) * rat_pow(c, -i);
  DiffOp out(std::move(r));
  return out.normalize();
}

DiffOp op_translate(const DiffOp& L, const BigRat& c)
{
  // annihilates f(t + c) when L annihilates f: coefficients shifted by +c
  std::vector<UniPoly> r(L.order() + 1);
  for (long i = 0; i <= L.order(); ++i)
    r[i] = L.coeff(i).shifted(c);
  DiffOp out(std::move(r));
  return out.normalize();
}

DiffOp op_at_infinity(const DiffOp& L)
{
  // t = 1/s, D_t = -s^2 D_s
  long r = L.order();
  RatOp acc;
  RatOp base(std::vector<RatFun>{RatFun(), RatFun(-UniPoly::monomial(BigRat(1), 2))});
  RatOp pw = RatOp(DiffOp::identity());
  long maxdeg = L.max_degree();
  for (long i = 0; i <= r; ++i) {
    if (!L.coeff(i).is_zero_poly()) {
      // a_i(1/s) = s^{-d} * reversed(a_i)
      UniPoly rev = L.coeff(i).reversed(maxdeg);
      RatFun ai(rev, UniPoly::monomial(BigRat(1), maxdeg));
      acc = acc + ai * pw;
    }
    if (i < r) pw = base * pw;
  }
  return acc.cleared();
}

DiffOp conjugate_by_power_product(const DiffOp& L,
                                  const std::vector<std::pair<UniPoly, BigRat>>& gauge)
{
  // g = prod r_i^{gamma_i}; g^{-1} D g = D + g'/g
  RatFun w;
  for (const auto& [r, gam] : gauge)
    w = w + RatFun(gam) * RatFun(r.derivative(), r);
  RatOp base(std::vector<RatFun>{w, RatFun(BigRat(1))});
  RatOp acc, pw = RatOp(DiffOp::identity());
  for (long i = 0; i <= L.order(); ++i) {
    if (!L.coeff(i).is_zero_poly())
      acc = acc + RatFun(L.coeff(i)) * pw;
    if (i < L.order()) pw = base * pw;
  }
  return acc.cleared();
}

std::string op_to_json(const DiffOp& L, bool as_theta_form)
{
  nlohmann::json j;
  DiffOp N = L;
  N.normalize();
  j["order"] = N.order();
  j["theta"] = as_theta_form;
  nlohmann::json coeffs = nlohmann::json::array();
  if (as_theta_form) {
    ThetaForm T = theta_form(N);
    j["shift"] = T.shift;
    j["order"] = T.order();
    for (const auto& p : T.q) {
      nlohmann::json cj = nlohmann::json::array();
      for (const auto& c : p.coeffs()) cj.push_back(to_string(c));
      coeffs.push_back(cj);
    }
  } else {
    for (const auto& p : N.coeffs()) {
      nlohmann::json cj = nlohmann::json::array();
      for (const auto& c : p.coeffs()) cj.push_back(to_string(c));
      coeffs.push_back(cj);
    }
  }
  j["coefficients"] = coeffs;
  return j.dump(1);
}

DiffOp op_from_json(const std::string& text)
{
  nlohmann::json j = nlohmann::json::parse(text);
  bool theta = j.value("theta", false);
  std::vector<UniPoly> polys;
  for (const auto& cj : j.at("coefficients")) {
    std::vector<BigRat> c;
    for (const auto& s : cj) {
      if (s.is_string())
        c.push_back(rat_from_string(s.get<std::string>()));
      else
        c.push_back(BigRat(s.get<long>()));
    }
    polys.emplace_back(std::move(c));
  }
  if (!theta) {
    DiffOp out(std::move(polys));
    return out.normalize();
  }
  ThetaForm T;
  T.shift = j.value("shift", 0);
  T.q = std::move(polys);
  return from_theta_form(T);
}

} // namespace diag
