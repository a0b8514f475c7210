#include <diagonals/frobenius.hpp>

#include <algorithm>
#include <map>

namespace diag {

namespace {

DiffOp moved_to_origin(const DiffOp& L, const AnalysisPoint& point)
{
  if (point.at_infinity) return op_at_infinity(L);
  if (is_zero(point.value)) return L;
  return op_translate(L, point.value);
}

} // namespace

IndicialData indicial(const DiffOp& L, const AnalysisPoint& point)
{
  DiffOp M = moved_to_origin(L, point);
  ThetaForm T = theta_form(M);
  UniPoly B0 = T.theta_poly_at(0);
  if (B0.degree() < M.order()) throw IrregularSingularity();
  IndicialData out;
  out.point = point;
  out.indicial_poly = primitive_part(B0);
  RootData rd = rational_roots_with_multiplicity(B0);
  out.rational_roots = rd.roots;
  std::sort(out.rational_roots.begin(), out.rational_roots.end());
  if (rd.rootless_cofactor.degree() >= 1) {
    // report the square-free factors of what is left
    UniPoly rest = rd.rootless_cofactor;
    while (rest.degree() >= 1) {
      UniPoly sf = square_free_part(rest);
      out.irrational_factors.push_back(sf);
      UniPoly q, r;
      UniPoly::divmod(rest, sf, q, r);
      assert(r.is_zero_poly());
      rest = primitive_part(q);
    }
  }
  return out;
}

// ------------------------------------------------------ class solving ----

namespace {

// affine (homogeneous) coordinates over the free parameters of a class
using ParamVec = std::vector<BigRat>;

void vec_resize(ParamVec& v, std::size_t n)
{
  if (v.size() < n) v.resize(n, BigRat(0));
}

void vec_axpy(ParamVec& acc, const BigRat& a, const ParamVec& x)
{
  if (is_zero(a)) return;
  vec_resize(acc, x.size());
  for (std::size_t i = 0; i < x.size(); ++i) acc[i] += a * x[i];
}

bool vec_zero(const ParamVec& v)
{
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

struct ClassSolver {
  const ThetaForm& T;
  BigRat rho;
  long K;      // top log layer index (layers 0..K)
  long N;      // series terms
  long kmax;   // largest t-power in the theta form

  std::vector<std::vector<UniPoly>> Pderiv; // Pderiv[k][m] = P_k^{(m)} / m!
  std::vector<std::vector<ParamVec>> c;     // c[l][n]
  std::size_t params = 0;
  std::vector<std::pair<long, long>> slots; // (n, l) where parameter i was created
  std::vector<bool> dead;                   // bound parameters

  ClassSolver(const ThetaForm& t, BigRat r, long k, long n) : T(t), rho(std::move(r)), K(k), N(n)
  {
    kmax = 0;
    for (const auto& q : T.q) kmax = std::max(kmax, q.degree());
    Pderiv.assign(kmax + 1, {});
    for (long kk = 0; kk <= kmax; ++kk) {
      UniPoly Pk = T.theta_poly_at(kk);
      BigRat invfact(1);
      for (long m = 0; m <= K + 1 || m <= Pk.degree(); ++m) {
        if (m > 0) invfact /= BigRat(m);
        Pderiv[kk].push_back(Pk * invfact);
        Pk = Pk.derivative();
        if (Pk.is_zero_poly() && (long)Pderiv[kk].size() > K + 1) break;
      }
    }
    c.assign(K + 1, std::vector<ParamVec>(N + 1));
  }

  BigRat pk_deriv_at(long k, long m, const BigRat& x) const
  {
    if (k >= (long)Pderiv.size() || m >= (long)Pderiv[k].size()) return BigRat(0);
    return Pderiv[k][m].eval(x);
  }

  void bind_constraint(const ParamVec& gamma)
  {
    // substitute the last live parameter with nonzero coefficient
    long j = -1;
    for (long i = (long)gamma.size(); i-- > 0;)
      if (!is_zero(gamma[i])) { j = i; break; }
    assert(j >= 0);
    BigRat gj = gamma[j];
    for (auto& layer : c)
      for (auto& v : layer) {
        if ((long)v.size() <= j || is_zero(v[j])) continue;
        BigRat f = v[j] / gj;
        for (std::size_t i = 0; i < gamma.size(); ++i)
          if ((long)i != j && !is_zero(gamma[i])) {
            vec_resize(v, gamma.size());
            v[i] -= f * gamma[i];
          }
        v[j] = 0;
      }
    if (j < (long)dead.size()) dead[j] = true;
  }

  void solve()
  {
    for (long n = 0; n <= N; ++n) {
      BigRat x = rho + BigRat(n);
      // rhs[l] = -sum_{k>=1} sum_m P_k^{(m)}(rho+n-k)/m! c[l+m][n-k]
      std::vector<ParamVec> rhs(K + 1);
      for (long k = 1; k <= std::min<long>(kmax, n); ++k) {
        BigRat xk = rho + BigRat(n - k);
        for (long l = 0; l <= K; ++l)
          for (long m = 0; l + m <= K; ++m) {
            BigRat w = pk_deriv_at(k, m, xk);
            if (!is_zero(w)) vec_axpy(rhs[l], -w, c[l + m][n - k]);
          }
      }
      BigRat b0 = pk_deriv_at(0, 0, x);
      if (!is_zero(b0)) {
        for (long l = K; l >= 0; --l) {
          ParamVec v = rhs[l];
          for (long m = 1; l + m <= K; ++m) {
            BigRat w = pk_deriv_at(0, m, x);
            if (!is_zero(w)) vec_axpy(v, -w, c[l + m][n]);
          }
          for (auto& e : v) e /= b0;
          c[l][n] = std::move(v);
        }
        continue;
      }
      // resonance: multiplicity mu = first nonvanishing derivative
      long mu = 1;
      while (is_zero(pk_deriv_at(0, mu, x))) ++mu;
      // pure constraints from l = K down to K - mu + 1
      for (long l = K; l > K - mu; --l) {
        ParamVec v = rhs[l];
        for (long m = mu; l + m <= K; ++m) {
          BigRat w = pk_deriv_at(0, m, x);
          if (!is_zero(w)) vec_axpy(v, -w, c[l + m][n]);
        }
        // v must vanish; bind a parameter otherwise
        for (auto& e : v) e = -e; // constraint: rhs - ... = 0
        if (!vec_zero(v)) bind_constraint(v);
      }
      // determined coefficients: E_l solves c[l+mu][n], l = K-mu .. 0
      BigRat bmu = pk_deriv_at(0, mu, x);
      for (long l = K - mu; l >= 0; --l) {
        ParamVec v = rhs[l];
        for (long m = mu + 1; l + m <= K; ++m) {
          BigRat w = pk_deriv_at(0, m, x);
          if (!is_zero(w)) vec_axpy(v, -w, c[l + m][n]);
        }
        for (auto& e : v) e /= bmu;
        c[l + mu][n] = std::move(v);
      }
      // new free parameters in layers 0..mu-1
      for (long l = 0; l < mu && l <= K; ++l) {
        ParamVec v(params + 1, BigRat(0));
        v[params] = 1;
        c[l][n] = std::move(v);
        slots.emplace_back(n, l);
        dead.push_back(false);
        ++params;
      }
    }
  }

  std::vector<std::size_t> live_params() const
  {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < params; ++i)
      if (!dead[i]) out.push_back(i);
    return out;
  }

  LogSeries solution_for(const ParamVec& combo) const
  {
    LogSeries s;
    s.exponent = rho;
    for (long l = 0; l <= K; ++l) {
      std::vector<BigRat> coeffs(N + 1, BigRat(0));
      for (long n = 0; n <= N; ++n) {
        const ParamVec& v = c[l][n];
        for (std::size_t i = 0; i < v.size() && i < combo.size(); ++i)
          coeffs[n] += v[i] * combo[i];
      }
      s.layers.emplace_back(std::move(coeffs));
    }
    s.normalize_layers();
    return s;
  }

  // free-slot coordinates of a solution table value
  std::vector<BigRat> slot_coords(const ParamVec& combo) const
  {
    std::vector<BigRat> out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (dead[i]) continue;
      auto [n, l] = slots[i];
      const ParamVec& v = c[l][n];
      BigRat val(0);
      for (std::size_t j = 0; j < v.size() && j < combo.size(); ++j) val += v[j] * combo[j];
      out.push_back(val);
    }
    return out;
  }
};

// layer down-shift applied to a coefficient table combo: returns the slot
// coordinates of Delta(solution(combo)); Delta is only valid on solutions
std::vector<BigRat> shift_slot_coords(const ClassSolver& S, const ParamVec& combo)
{
  std::vector<BigRat> out;
  for (std::size_t i = 0; i < S.slots.size(); ++i) {
    if (S.dead[i]) continue;
    auto [n, l] = S.slots[i];
    // layer l of Delta(y) is layer l+1 of y
    BigRat val(0);
    if (l + 1 <= S.K) {
      const ParamVec& v = S.c[l + 1][n];
      for (std::size_t j = 0; j < v.size() && j < combo.size(); ++j) val += v[j] * combo[j];
    }
    out.push_back(val);
  }
  return out;
}

// Gauss-Jordan helpers over Q for small dense matrices
struct SmallMat {
  std::size_t rows = 0, cols = 0;
  std::vector<BigRat> a;
  SmallMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, BigRat(0)) {}
  BigRat& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const BigRat& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// solve M x = b when solvable (M square-ish, full column rank expected)
std::optional<std::vector<BigRat>> solve_linear(SmallMat M, std::vector<BigRat> b)
{
  std::size_t n = M.rows, m = M.cols;
  std::vector<std::size_t> piv_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t sel = n;
    for (std::size_t i = row; i < n; ++i)
      if (!is_zero(M.at(i, col))) { sel = i; break; }
    if (sel == n) continue;
    for (std::size_t j = 0; j < m; ++j) std::swap(M.at(sel, j), M.at(row, j));
    std::swap(b[sel], b[row]);
    BigRat ip = 1 / M.at(row, col);
    for (std::size_t j = 0; j < m; ++j) M.at(row, j) *= ip;
    b[row] *= ip;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || is_zero(M.at(i, col))) continue;
      BigRat f = M.at(i, col);
      for (std::size_t j = 0; j < m; ++j) M.at(i, j) -= f * M.at(row, j);
      b[i] -= f * b[row];
    }
    piv_col.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < n; ++i)
    if (!is_zero(b[i])) return std::nullopt;
  std::vector<BigRat> x(m, BigRat(0));
  for (std::size_t r2 = 0; r2 < piv_col.size(); ++r2) x[piv_col[r2]] = b[r2];
  return x;
}

} // namespace

FrobeniusBasis frobenius_basis(const DiffOp& L, const AnalysisPoint& point, long n_terms)
{
  DiffOp M = moved_to_origin(L, point);
  ThetaForm T = theta_form(M);
  UniPoly B0 = T.theta_poly_at(0);
  if (B0.degree() < M.order()) throw IrregularSingularity();
  RootData rd = rational_roots_with_multiplicity(B0);

  // group rational roots into classes mod 1
  std::map<BigRat, std::vector<std::pair<BigRat, int>>> classes; // frac part -> roots
  for (const auto& [root, mult] : rd.roots) {
    BigRat frac = root - BigRat(BigInt(root.get_num()) / BigInt(root.get_den()) -
                                (sgn(root) < 0 && !is_integer(root) ? 1 : 0));
    classes[frac].push_back({root, mult});
  }

  FrobeniusBasis basis;
  basis.point = point;
  for (auto& [frac, roots] : classes) {
    std::sort(roots.begin(), roots.end());
    BigRat rho = roots.front().first;
    long maxoff = to_long(roots.back().first - rho);
    int Mtot = 0;
    for (const auto& [r, m] : roots) Mtot += m;
    long K = Mtot - 1;
    long N = n_terms + maxoff;
    ClassSolver S(T, rho, K, N);
    S.solve();
    auto live = S.live_params();
    std::size_t dim = live.size();
    assert((int)dim == Mtot);

    // basis combos: unit vectors on live params
    std::vector<ParamVec> combos;
    for (auto i : live) {
      ParamVec v(S.params, BigRat(0));
      v[i] = 1;
      combos.push_back(std::move(v));
    }
    // slot-coordinate matrix: columns = basis solutions
    SmallMat coords(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
      auto sc = S.slot_coords(combos[j]);
      for (std::size_t i = 0; i < dim; ++i) coords.at(i, j) = sc[i];
    }
    // Delta matrix in parameter space: solve coords * d_j = shift_coords(e_j)
    SmallMat Delta(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
      auto sc = shift_slot_coords(S, combos[j]);
      auto d = solve_linear(coords, sc);
      assert(d.has_value());
      for (std::size_t i = 0; i < dim; ++i) Delta.at(i, j) = (*d)[i];
    }

    // Jordan chains of the nilpotent Delta
    auto apply_delta = [&](const std::vector<BigRat>& v) {
      std::vector<BigRat> out(dim, BigRat(0));
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out[i] += Delta.at(i, j) * v[j];
      return out;
    };
    auto height = [&](std::vector<BigRat> v) {
      int h = 0;
      for (;;) {
        bool zero = std::all_of(v.begin(), v.end(), [](const BigRat& x) { return is_zero(x); });
        if (zero) return h - 1;
        v = apply_delta(v);
        ++h;
        if (h > (int)dim + 1) break;
      }
      return h - 1;
    };

    // greedy chain extraction with Gaussian independence bookkeeping
    std::vector<std::vector<BigRat>> taken; // all chain members, for independence
    auto independent = [&](const std::vector<BigRat>& v) {
      // reduce v against taken (simple Gaussian over Q)
      std::vector<std::vector<BigRat>> rows = taken;
      rows.push_back(v);
      std::size_t rnk = 0;
      std::vector<std::vector<BigRat>> mat = rows;
      for (std::size_t col = 0; col < dim && rnk < mat.size(); ++col) {
        std::size_t sel = mat.size();
        for (std::size_t i = rnk; i < mat.size(); ++i)
          if (!is_zero(mat[i][col])) { sel = i; break; }
        if (sel == mat.size()) continue;
        std::swap(mat[sel], mat[rnk]);
        for (std::size_t i = 0; i < mat.size(); ++i) {
          if (i == rnk || is_zero(mat[i][col])) continue;
          BigRat f = mat[i][col] / mat[rnk][col];
          for (std::size_t j = 0; j < dim; ++j) mat[i][j] -= f * mat[rnk][j];
        }
        ++rnk;
      }
      return rnk == taken.size() + 1;
    };

    std::vector<std::vector<std::vector<BigRat>>> chains; // chain: top..bottom
    for (;;) {
      int best_h = -1;
      std::vector<BigRat> best;
      for (std::size_t j = 0; j < dim; ++j) {
        std::vector<BigRat> v(dim, BigRat(0));
        v[j] = 1;
        if (!independent(v)) continue;
        int h = height(v);
        if (h > best_h) {
          best_h = h;
          best = v;
        }
      }
      if (best_h < 0) break;
      std::vector<std::vector<BigRat>> chain;
      std::vector<BigRat> cur = best;
      for (int k = 0; k <= best_h; ++k) {
        chain.push_back(cur);
        taken.push_back(cur);
        cur = apply_delta(cur);
      }
      chains.push_back(std::move(chain));
      if (taken.size() >= dim) break;
    }

    // normalization: reduce each chain top against all other basis members
    // on the slot coordinates (zeroed resonant coefficients), then scale
    // the deepest layer to a leading 1
    std::vector<std::vector<BigRat>> all_members;
    for (const auto& ch : chains)
      for (const auto& v : ch) all_members.push_back(v);

    for (std::size_t ci = 0; ci < chains.size(); ++ci) {
      auto& chain = chains[ci];
      std::vector<BigRat> top = chain[0];
      // reduce only against members of strictly smaller log depth so the
      // chain's own leading structure is preserved
      std::size_t top_height = chain.size() - 1;
      std::vector<std::vector<BigRat>> others;
      for (std::size_t cj = 0; cj < chains.size(); ++cj)
        for (std::size_t k = 0; k < chains[cj].size(); ++k)
          if (chains[cj].size() - 1 - k < top_height) others.push_back(chains[cj][k]);
      // zero out as many slot coordinates of top as possible using others,
      // scanning slots in deterministic order
      auto coords_of = [&](const std::vector<BigRat>& v) {
        ParamVec combo(S.params, BigRat(0));
        std::size_t idx = 0;
        for (auto i : live) combo[i] = v[idx++];
        return S.slot_coords(combo);
      };
      std::vector<std::vector<BigRat>> other_coords;
      for (const auto& o : others) other_coords.push_back(coords_of(o));
      // row-reduce the others on slot coordinates, mirroring the row
      // operations on the parameter vectors, then sweep the top through
      // every pivot
      std::size_t rk = 0;
      std::vector<std::pair<std::size_t, std::size_t>> pivots; // (row, col)
      for (std::size_t col = 0; col < dim && rk < others.size(); ++col) {
        std::size_t sel = others.size();
        for (std::size_t i = rk; i < others.size(); ++i)
          if (!is_zero(other_coords[i][col])) { sel = i; break; }
        if (sel == others.size()) continue;
        std::swap(other_coords[sel], other_coords[rk]);
        std::swap(others[sel], others[rk]);
        for (std::size_t i = 0; i < others.size(); ++i) {
          if (i == rk || is_zero(other_coords[i][col])) continue;
          BigRat f = other_coords[i][col] / other_coords[rk][col];
          for (std::size_t sp = 0; sp < dim; ++sp)
            other_coords[i][sp] -= f * other_coords[rk][sp];
          for (std::size_t j = 0; j < dim; ++j) others[i][j] -= f * others[rk][j];
        }
        pivots.emplace_back(rk, col);
        ++rk;
      }
      std::vector<BigRat> top_coords = coords_of(top);
      for (const auto& [prow, pcol] : pivots) {
        if (is_zero(top_coords[pcol])) continue;
        BigRat f = top_coords[pcol] / other_coords[prow][pcol];
        for (std::size_t sp = 0; sp < dim; ++sp) top_coords[sp] -= f * other_coords[prow][sp];
        for (std::size_t j = 0; j < dim; ++j) top[j] -= f * others[prow][j];
      }
      // rebuild chain from normalized top
      chain.clear();
      std::vector<BigRat> cur = top;
      int h = height(top);
      for (int k = 0; k <= h; ++k) {
        chain.push_back(cur);
        cur = apply_delta(cur);
      }
    }

    // emit groups, sorted by chain length descending then deterministic
    std::sort(chains.begin(), chains.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    for (const auto& chain : chains) {
      std::vector<LogSeries> group;
      // bottom (no-log) first, top last
      for (std::size_t k = chain.size(); k-- > 0;) {
        ParamVec combo(S.params, BigRat(0));
        std::size_t idx = 0;
        for (auto i : live) combo[i] = chain[k][idx++];
        LogSeries sol = S.solution_for(combo);
        group.push_back(sol);
      }
      // scale so the deepest layer of the top solution leads with 1
      LogSeries& top = group.back();
      int lp = top.log_power();
      if (lp >= 0) {
        const TruncSeries& deep = top.layers[lp];
        long v = deep.valuation();
        if (v <= deep.trunc_order()) {
          BigRat lead = deep[v];
          BigRat inv = 1 / lead;
          for (auto& sol : group)
            for (auto& layer : sol.layers) layer = layer * inv;
        }
      }
      basis.groups.push_back(std::move(group));
    }
  }

  // deterministic group order: exponent ascending within equal depths,
  // longer staircases first
  std::sort(basis.groups.begin(), basis.groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.back().exponent < b.back().exponent;
  });
  return basis;
}

int max_log_power(const DiffOp& L, const AnalysisPoint& point)
{
  ThetaForm T = theta_form(moved_to_origin(L, point));
  UniPoly B0 = T.theta_poly_at(0);
  RootData rd = rational_roots_with_multiplicity(B0);
  long maxoff = 8;
  for (const auto& [r, m] : rd.roots)
    for (const auto& [r2, m2] : rd.roots)
      if (is_integer(r - r2)) maxoff = std::max(maxoff, 1 + to_long(abs(r - r2)));
  FrobeniusBasis b = frobenius_basis(L, point, maxoff + 8);
  return b.max_log_power();
}

bool is_MUM(const DiffOp& L)
{
  IndicialData d = indicial(L, AnalysisPoint::origin());
  if (!d.irrational_factors.empty()) return false;
  if (d.rational_roots.size() != 1) return false;
  if (d.rational_roots[0].second != L.order()) return false;
  return true;
}

std::vector<TruncSeries> ordinary_basis(const DiffOp& L, long n_terms)
{
  ThetaForm T = theta_form(L);
  UniPoly B0 = T.theta_poly_at(0);
  long r = L.order();
  long kmax = 0;
  for (const auto& q : T.q) kmax = std::max(kmax, q.degree());
  // ordinary point: B0 = c * theta(theta-1)...(theta-r+1)
  std::vector<TruncSeries> out;
  for (long init = 0; init < r; ++init) {
    std::vector<BigRat> c(n_terms + 1, BigRat(0));
    if (init <= n_terms) c[init] = 1;
    for (long n = 0; n <= n_terms; ++n) {
      if (n < r) continue; // initial segment is free
      BigRat acc(0);
      for (long k = 1; k <= std::min(kmax, n); ++k) {
        UniPoly Pk = T.theta_poly_at(k);
        if (Pk.is_zero_poly()) continue;
        acc += Pk.eval(BigRat(n - k)) * c[n - k];
      }
      BigRat b0 = B0.eval(BigRat(n));
      assert(!is_zero(b0));
      c[n] = -acc / b0;
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

BigRat find_ordinary_point(const DiffOp& L)
{
  const UniPoly& lead = L.leading();
  for (long num = 0;; ++num)
    for (int s = 0; s < 2; ++s) {
      BigRat cand(s ? -num : num);
      if (num == 0 && s == 1) continue;
      if (!is_zero(lead.eval(cand))) {
        // also require that the indicial polynomial there is the ordinary one
        DiffOp M2 = is_zero(cand) ? L : op_translate(L, cand);
        ThetaForm T = theta_form(M2);
        UniPoly B0 = T.theta_poly_at(0);
        bool ordinary = B0.degree() == L.order();
        if (ordinary) {
          // ordinary means roots exactly 0..r-1
          bool ok = true;
          for (long i = 0; i < L.order(); ++i)
            if (!is_zero(B0.eval(BigRat(i)))) ok = false;
          if (ok) return cand;
        }
      }
    }
}

BoundednessVerdict globally_bounded(const TruncSeries& s, long n_terms, int prime_budget)
{
  BoundednessVerdict v;
  long N = std::min<long>(n_terms, s.trunc_order());
  v.terms_examined = N;
  std::map<BigInt, long> first_seen;   // prime -> first index
  std::map<BigInt, BigRat> max_slope;  // prime -> max over n of v_p(den)/n
  for (long n = 1; n <= N; ++n) {
    BigInt d = den(s[n]);
    if (d == 1) continue;
    BigInt rest = d;
    for (BigInt p(2); p * p <= rest && p < 100000;) {
      if (rest % p == 0) {
        long e = 0;
        while (rest % p == 0) {
          rest /= p;
          ++e;
        }
        if (!first_seen.count(p)) first_seen[p] = n;
        BigRat slope = BigRat(e) / BigRat(n);
        if (!max_slope.count(p) || max_slope[p] < slope) max_slope[p] = slope;
      }
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    if (rest > 1) {
      if (!first_seen.count(rest)) first_seen[rest] = n;
      BigRat slope = BigRat(1) / BigRat(n);
      if (!max_slope.count(rest) || max_slope[rest] < slope) max_slope[rest] = slope;
    }
  }
  if (first_seen.empty()) {
    v.kind = BoundednessVerdict::Bounded;
    v.rescale_constant = 1;
    v.note = "integer coefficients";
    return v;
  }
  // Eisenstein-style violation: new primes of size ~n keep entering
  int late_entries = 0;
  BigInt witness(0);
  for (const auto& [p, n0] : first_seen)
    if (p >= n0 && n0 > 2) {
      ++late_entries;
      witness = std::max(witness, p);
    }
  if (late_entries >= 3) {
    v.kind = BoundednessVerdict::UnboundedEvidence;
    v.witness_prime = witness;
    v.note = "denominator primes keep entering at their own index";
    return v;
  }
  if ((int)first_seen.size() > prime_budget) {
    v.kind = BoundednessVerdict::UnboundedEvidence;
    v.witness_prime = first_seen.rbegin()->first;
    v.note = "more distinct denominator primes than budget";
    return v;
  }
  // candidate rescale constant c = prod p^{ceil(max slope)}
  BigInt c(1);
  for (const auto& [p, sl] : max_slope) {
    BigInt e = BigInt(sl.get_num()) / BigInt(sl.get_den());
    if (BigRat(e) < sl) e += 1;
    c *= int_pow(p, e.get_ui());
  }
  // verify c^n a_n integral
  BigInt cp(1);
  for (long n = 1; n <= N; ++n) {
    cp *= c;
    BigRat scaled = s[n] * BigRat(cp);
    if (!is_integer(scaled)) {
      v.kind = BoundednessVerdict::Inconclusive;
      v.note = "no uniform rescale found within examined terms";
      return v;
    }
  }
  v.kind = BoundednessVerdict::Bounded;
  v.rescale_constant = c;
  return v;
}

} // namespace diag
