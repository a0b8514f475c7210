#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <diagonals/frobenius.hpp>
#include <diagonals/guess.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace diag;

namespace {

DiffOp load_op(const std::string& name)
{
  const char* root = std::getenv("DIAGONALS_DATA");
  REQUIRE(root != nullptr);
  std::ifstream in(std::string(root) + "/operators/" + name);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return op_from_json(buf.str());
}

} // namespace

TEST_CASE("indicial of U3 at the origin: triple root 0")
{
  DiffOp U3 = load_op("u3_quartic_lgf.json");
  IndicialData d = indicial(U3, AnalysisPoint::origin());
  REQUIRE(d.rational_roots.size() == 1);
  CHECK(d.rational_roots[0].first == 0);
  CHECK(d.rational_roots[0].second == 3);
  CHECK(is_MUM(U3));
}

TEST_CASE("indicial of D^2: roots 0 and 1, basis {1, t} without logs")
{
  DiffOp D2 = DiffOp::derivation() * DiffOp::derivation();
  IndicialData d = indicial(D2, AnalysisPoint::origin());
  REQUIRE(d.rational_roots.size() == 2);
  CHECK(d.rational_roots[0].first == 0);
  CHECK(d.rational_roots[1].first == 1);

  FrobeniusBasis b = frobenius_basis(D2, AnalysisPoint::origin(), 6);
  CHECK(b.solution_count() == 2);
  CHECK(b.max_log_power() == 0);
}

TEST_CASE("Euler operator theta^2 has a log")
{
  DiffOp th2 = DiffOp::theta() * DiffOp::theta();
  FrobeniusBasis b = frobenius_basis(th2, AnalysisPoint::origin(), 6);
  CHECK(b.solution_count() == 2);
  CHECK(b.max_log_power() == 1);
  REQUIRE(b.groups.size() == 1);
  CHECK(b.groups[0].size() == 2);
}

TEST_CASE("staircase sharing and annihilation on the sc4d operator")
{
  DiffOp N4 = load_op("cy_n4_sc4d.json");
  CHECK(is_MUM(N4));
  FrobeniusBasis b = frobenius_basis(N4, AnalysisPoint::origin(), 10);
  REQUIRE(b.groups.size() == 1);
  REQUIRE(b.groups[0].size() == 4);
  CHECK(b.max_log_power() == 3);

  // annihilation of every basis solution
  for (const auto& sol : b.groups[0]) {
    LogSeries res = apply_op(N4, sol);
    for (const auto& layer : res.layers)
      for (long i = 0; i + 6 <= layer.trunc_order(); ++i) CHECK(is_zero(layer[i]));
  }

  // sharing: layer l of solution j equals layer l-1 of solution j-1
  for (std::size_t j = 1; j < 4; ++j) {
    const LogSeries& sj = b.groups[0][j];
    const LogSeries& sp = b.groups[0][j - 1];
    for (std::size_t l = 1; l < sj.layers.size(); ++l) {
      if (l - 1 >= sp.layers.size()) {
        CHECK(sj.layers[l].is_zero_series());
        continue;
      }
      CHECK(sj.layers[l] == sp.layers[l - 1]);
    }
  }

  // reference staircase values
  const LogSeries& top = b.groups[0][3];
  REQUIRE(top.layers.size() == 4);
  const TruncSeries& S0 = top.layers[3];
  CHECK(S0[0] == 1);
  CHECK(S0[1] == 164);
  CHECK(S0[2] == 66972);
  CHECK(S0[3] == rat_from_string("38050160"));
  const TruncSeries& S10 = top.layers[2];
  CHECK(is_zero(S10[0]));
  CHECK(S10[1] == 360);
  CHECK(S10[2] == 182484);
  CHECK(S10[3] == rat_from_string("111758064"));
  const TruncSeries& S20 = top.layers[1];
  CHECK(is_zero(S20[0]));
  CHECK(S20[1] == -128);
  CHECK(S20[2] == -12768);
  CHECK(S20[3] == rat_from_string("36154528/9"));
  const TruncSeries& S30 = top.layers[0];
  CHECK(is_zero(S30[0]));
  CHECK(S30[1] == 256);
  CHECK(S30[2] == 98560);
  CHECK(S30[3] == rat_from_string("1479864064/27"));
}

TEST_CASE("indicial exponents of the sc4d N4 at infinity")
{
  DiffOp N4 = load_op("cy_n4_sc4d.json");
  IndicialData d = indicial(N4, AnalysisPoint::infinity());
  REQUIRE(d.rational_roots.size() == 4);
  CHECK(d.rational_roots[0].first == rat(1, 2));
  CHECK(d.rational_roots[1].first == rat(3, 4));
  CHECK(d.rational_roots[2].first == rat(5, 4));
  CHECK(d.rational_roots[3].first == rat(3, 2));
}

TEST_CASE("first-order operator has log power 0 and predicted Nv 2")
{
  // (1-4t)D - 2
  DiffOp L(std::vector<UniPoly>{UniPoly(BigRat(-2)),
                                UniPoly(std::vector<BigRat>{BigRat(1), BigRat(-4)})});
  CHECK(max_log_power(L, AnalysisPoint::origin()) == 0);
  CHECK(predict_Nv(L) == 2);
}

TEST_CASE("U3 log power and MUM relation")
{
  DiffOp U3 = load_op("u3_quartic_lgf.json");
  CHECK(max_log_power(U3, AnalysisPoint::origin()) == 2);
  CHECK(predict_Nv(U3) == 4);
  // for MUM operators max log power = order - 1
  CHECK(max_log_power(U3, AnalysisPoint::origin()) == U3.order() - 1);
}

TEST_CASE("translation invariance of the local analysis")
{
  // geometric series operator; singularity at t = 1 with exponent -1
  DiffOp L(std::vector<UniPoly>{UniPoly(BigRat(-1)),
                                UniPoly(std::vector<BigRat>{BigRat(1), BigRat(-1)})});
  IndicialData d = indicial(L, AnalysisPoint::at(BigRat(1)));
  REQUIRE(d.rational_roots.size() == 1);
  CHECK(d.rational_roots[0].first == -1);

  DiffOp moved = op_translate(L, BigRat(1));
  IndicialData d0 = indicial(moved, AnalysisPoint::origin());
  CHECK(d0.rational_roots == d.rational_roots);
}

TEST_CASE("ordinary basis solves the equation")
{
  DiffOp U3 = load_op("u3_quartic_lgf.json");
  DiffOp M = op_translate(U3, BigRat(1)); // t = 1 is ordinary
  auto basis = ordinary_basis(M, 24);
  CHECK(basis.size() == 3);
  for (const auto& f : basis) CHECK(apply_op(M, f).is_zero_series());
  CHECK(find_ordinary_point(U3) == 1);
}

TEST_CASE("globally_bounded verdicts")
{
  // CY2 prefix: integers
  std::vector<BigRat> cy2{BigRat(1), BigRat(15120), rat_from_string("3491888400"),
                          rat_from_string("1304290155168000")};
  auto v = globally_bounded(TruncSeries(std::move(cy2)), 4);
  CHECK(v.kind == BoundednessVerdict::Bounded);
  CHECK(v.rescale_constant == 1);

  // constant series
  auto vc = globally_bounded(TruncSeries(BigRat(1), 5), 5);
  CHECK(vc.kind == BoundednessVerdict::Bounded);

  // harmonic numbers: every prime <= n eventually divides a denominator
  long N = 60;
  std::vector<BigRat> h(N + 1, BigRat(0));
  for (long n = 1; n <= N; ++n) h[n] = h[n - 1] + BigRat(1) / BigRat(n);
  auto vh = globally_bounded(TruncSeries(std::move(h)), N);
  CHECK(vh.kind == BoundednessVerdict::UnboundedEvidence);

  // central binomials over 3^n: bounded with rescale 3
  std::vector<BigRat> cb(N + 1);
  for (long n = 0; n <= N; ++n)
    cb[n] = BigRat(binomial(2 * (unsigned long)n, (unsigned long)n)) / BigRat(int_pow(BigInt(3), n));
  auto vb = globally_bounded(TruncSeries(std::move(cb)), N);
  CHECK(vb.kind == BoundednessVerdict::Bounded);
  CHECK(vb.rescale_constant == 3);
}

TEST_CASE("staircase fronts: only the deepest-log companion is globally bounded")
{
  // order-8 operator with staircases at exponents 0 (depth 4), 1/2 (depth 2),
  // 1/3, 2/3: the series in front of ln^3 is the (bounded) diagonal, while
  // the no-log fronts of the lower staircases are not globally bounded
  DiffOp L8 = load_op("guttmann_l8.json");
  FrobeniusBasis b = frobenius_basis(L8, AnalysisPoint::origin(), 70);
  REQUIRE(b.groups.size() == 4);
  const TruncSeries& diag_front = b.groups[0].back().layers.back();
  auto v0 = globally_bounded(diag_front, 64);
  CHECK(v0.kind == BoundednessVerdict::Bounded);
  for (std::size_t g = 1; g < b.groups.size(); ++g) {
    const TruncSeries& t0 = b.groups[g].front().layers.front();
    auto v = globally_bounded(t0, 64);
    CHECK(v.kind != BoundednessVerdict::Bounded);
  }
}

TEST_CASE("irregular singularity is detected")
{
  // D - 1 has an irregular point at infinity (exponential growth)
  DiffOp L = DiffOp::derivation() - DiffOp::identity();
  CHECK_THROWS_AS(indicial(L, AnalysisPoint::infinity()), IrregularSingularity);
}

TEST_CASE("irrational indicial roots are reported via square-free factors")
{
  // theta^2 - 2: indicial roots +-sqrt(2)
  ThetaForm T;
  T.shift = 0;
  T.q = {UniPoly(BigRat(-2)), UniPoly(), UniPoly(BigRat(1))};
  DiffOp L = from_theta_form(T);
  IndicialData d = indicial(L, AnalysisPoint::origin());
  CHECK(d.rational_roots.empty());
  REQUIRE(d.irrational_factors.size() == 1);
  CHECK(d.irrational_factors[0].degree() == 2);
}
