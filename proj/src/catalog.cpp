#include <diagonals/catalog.hpp>

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <atomic>
#include <thread>

namespace diag {

using nlohmann::json;

namespace {

BigRat rat_from_json(const json& j)
{
  if (j.is_number_integer()) return BigRat((long)j.get<long>());
  return rat_from_string(j.get<std::string>());
}

} // namespace

CatalogEntry entry_from_json_text(const std::string& text)
{
  json j = json::parse(text);
  CatalogEntry e;
  e.id = j.at("id").get<std::string>();
  e.source = j.value("source", "");
  std::string tier = j.value("tier", "fast");
  e.tier = tier == "slow" ? Tier::Slow : tier == "reference" ? Tier::Reference : Tier::Fast;
  e.expr = j.value("expr", "");
  if (j.contains("params"))
    for (auto& [k, v] : j.at("params").items()) e.params[k] = rat_from_json(v);
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    std::string type = o.value("type", "term");
    if (type == "term")
      e.oracle = CoefficientOracle::from_term(o.at("term").get<std::string>());
    else {
      std::map<std::string, BigRat> params;
      if (o.contains("params"))
        for (auto& [k, v] : o.at("params").items()) params[k] = rat_from_json(v);
      e.oracle = CoefficientOracle::native(o.at("name").get<std::string>(), params);
    }
  }
  e.operator_file = j.value("operator_file", "");
  e.terms = j.value("terms", 24);
  if (j.contains("guess")) {
    const json& g = j.at("guess");
    e.guess.max_order = g.value("max_order", e.guess.max_order);
    e.guess.max_degree = g.value("max_degree", e.guess.max_degree);
    e.guess.guard_terms = g.value("guard", e.guess.guard_terms);
  }
  if (j.contains("expect")) {
    const json& x = j.at("expect");
    if (x.contains("order")) e.expect.order = x.at("order").get<long>();
    if (x.contains("log_power")) e.expect.log_power = x.at("log_power").get<int>();
    if (x.contains("nv")) e.expect.nv = x.at("nv").get<long>();
    if (x.contains("signature")) e.expect.signature = x.at("signature").get<std::string>();
    if (x.contains("mum")) e.expect.mum = x.at("mum").get<bool>();
    if (x.contains("bounded")) e.expect.bounded = x.at("bounded").get<bool>();
    if (x.contains("ext2_order")) e.expect.ext2_order = x.at("ext2_order").get<long>();
    if (x.contains("sym2_order")) e.expect.sym2_order = x.at("sym2_order").get<long>();
    if (x.contains("series_prefix"))
      for (const auto& v : x.at("series_prefix")) e.expect.series_prefix.push_back(rat_from_json(v));
  }
  if (j.contains("adjoint")) {
    AdjointCheck a;
    a.max_order = j.at("adjoint").value("max_order", 2);
    a.max_degree = j.at("adjoint").value("max_degree", 40);
    a.expect_found = j.at("adjoint").value("expect_found", true);
    e.adjoint = a;
  }
  if (j.contains("cy")) {
    CyCheck c;
    c.terms = j.at("cy").value("terms", 8);
    c.n0 = j.at("cy").value("n0", 1);
    e.cy = c;
  }
  if (j.contains("factor_checks"))
    for (const auto& f : j.at("factor_checks")) {
      FactorCheck fc;
      fc.right_factor_file = f.value("right_factor_file", "");
      fc.right_factor_term = f.value("right_factor_term", "");
      fc.factor_terms = f.value("factor_terms", 48);
      e.factor_checks.push_back(std::move(fc));
    }
  if (j.contains("p_curvature")) {
    PCurvatureCheck pc;
    pc.operator_file = j.at("p_curvature").at("operator_file").get<std::string>();
    for (const auto& p : j.at("p_curvature").at("primes")) pc.primes.push_back(p.get<std::uint64_t>());
    for (const auto& p : j.at("p_curvature").at("expect")) pc.expect.push_back(p.get<bool>());
    e.p_curvature = pc;
  }
  if (j.contains("pullback")) {
    PullbackCheck pb;
    pb.base_term = j.at("pullback").at("base_term").get<std::string>();
    pb.prefactor = j.at("pullback").value("prefactor", "1");
    pb.substitution = j.at("pullback").at("substitution").get<std::string>();
    pb.terms = j.at("pullback").value("terms", 6);
    e.pullback = pb;
  }
  if (j.contains("frobenius_shape"))
    for (const auto& g : j.at("frobenius_shape")) {
      ShapeGroup sg;
      sg.exponent = rat_from_json(g.at("exponent"));
      sg.depth = g.at("depth").get<int>();
      e.frobenius_shape.push_back(sg);
    }
  if (j.contains("infinity")) {
    InfinityCheck ic;
    for (const auto& v : j.at("infinity").at("top_series_prefix"))
      ic.top_series_prefix.push_back(rat_from_json(v));
    e.infinity = ic;
  }
  e.notes = j.value("notes", "");
  return e;
}

std::vector<CatalogEntry> load_catalog(const std::string& data_dir)
{
  namespace fs = std::filesystem;
  std::vector<CatalogEntry> out;
  std::vector<fs::path> files;
  for (const auto& p : fs::directory_iterator(data_dir + "/catalog"))
    if (p.path().extension() == ".json") files.push_back(p.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream buf;
    buf << in.rdbuf();
    out.push_back(entry_from_json_text(buf.str()));
  }
  return out;
}

DiffOp load_operator_file(const std::string& data_dir, const std::string& name)
{
  std::ifstream in(data_dir + "/operators/" + name);
  if (!in.good()) throw std::runtime_error("operator file not found: " + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return op_from_json(buf.str());
}

TruncSeries series_from_t_expression(const std::string& text, long order)
{
  QExpr q = parse(text);
  if (q.n_vars() != 0) throw std::runtime_error("expected a pure-t expression: " + text);
  // the numerator holds the whole expression as coefficient structure
  CoeffSeries c;
  c.terms.push_back(CoeffSeries::Term{q.numerator.constant, {}});
  for (const auto& m : q.numerator.monomials)
    for (const auto& term : m.coeff.terms) c.terms.push_back(term);
  // factors with pure-t bodies become power atoms
  TruncSeries acc = c.expand(order);
  for (const auto& [g, alpha] : q.factors) {
    CoeffSeries f;
    f.terms.push_back(CoeffSeries::Term{g.constant, {}});
    for (const auto& m : g.monomials)
      for (const auto& term : m.coeff.terms) f.terms.push_back(term);
    acc = acc * series_pow_rational(f.expand(order), alpha);
  }
  return acc;
}

bool pullback_identity_check(const TruncSeries& target, const TruncSeries& base,
                             const TruncSeries& prefactor, const TruncSeries& substitution,
                             long n_terms)
{
  long n = n_terms - 1;
  TruncSeries rhs = prefactor.truncated(n) * series_compose(base.truncated(n), substitution.truncated(n));
  return target.truncated(n) == rhs;
}

// ------------------------------------------------------------- run_entry --

namespace {

std::string sig_name(GaloisSignature::Kind k)
{
  switch (k) {
    case GaloisSignature::SymplecticSignature: return "Sp";
    case GaloisSignature::OrthogonalSignature: return "SO";
    default: return "none";
  }
}

void add_check(AnalysisReport& rep, const std::string& name, bool pass,
               const std::string& detail = "")
{
  rep.checks.push_back({name, pass, detail});
}

} // namespace

AnalysisReport run_entry(const CatalogEntry& entry, const std::string& data_dir)
{
  AnalysisReport rep;
  rep.id = entry.id;
  auto t_start = std::chrono::steady_clock::now();
  if (entry.tier == Tier::Reference) {
    rep.status = "reference";
    rep.computed["note"] = "reference-only entry: expectations recorded, run not attempted";
    return rep;
  }
  try {
    // 1. series acquisition
    std::optional<QExpr> q;
    if (!entry.expr.empty())
      q = entry.params.empty() ? parse(entry.expr) : substitute_param(entry.expr, entry.params);
    std::vector<BigRat> coeffs;
    if (entry.oracle) {
      coeffs = oracle_prefix(*entry.oracle, entry.terms);
      if (q) {
        long m = std::min<long>(6, entry.terms);
        TruncSeries d = diagonal(*q, m, DiagEngine::Fast);
        bool ok = true;
        for (long i = 0; i < m; ++i)
          if (d[i] != coeffs[i]) ok = false;
        add_check(rep, "oracle_vs_diag", ok, "first " + std::to_string(m) + " terms");
      }
    } else if (q) {
      TruncSeries d = diagonal(*q, entry.terms, DiagEngine::Fast);
      coeffs.assign(d.coeffs().begin(), d.coeffs().end());
    }
    TruncSeries series(coeffs);

    if (!entry.expect.series_prefix.empty()) {
      bool ok = true;
      for (std::size_t i = 0; i < entry.expect.series_prefix.size(); ++i)
        if (series[i] != entry.expect.series_prefix[i]) ok = false;
      add_check(rep, "series_prefix", ok);
    }

    // 2. the operator: guessed or loaded
    bool needs_operator = entry.expect.order || entry.expect.log_power ||
                          entry.expect.nv || entry.expect.signature ||
                          entry.expect.mum || entry.expect.ext2_order ||
                          entry.expect.sym2_order || entry.adjoint || entry.cy ||
                          !entry.factor_checks.empty() ||
                          !entry.frobenius_shape.empty() || entry.infinity.has_value();
    DiffOp L;
    bool have_op = false;
    if (!entry.operator_file.empty()) {
      L = load_operator_file(data_dir, entry.operator_file);
      have_op = true;
      if (!series.is_zero_series() && series.trunc_order() >= L.order() + 4)
        add_check(rep, "operator_annihilates_series",
                  apply_op(L, series).is_zero_series());
    } else if (!coeffs.empty() && needs_operator) {
      auto res = guess_min_ode(series, entry.guess);
      if (res) {
        L = res->op;
        have_op = true;
        rep.computed["order"] = std::to_string(res->order);
        rep.computed["degree"] = std::to_string(res->degree);
        bool min_ok = min_order_certificate(series, L, entry.guess);
        add_check(rep, "order_minimality_certificate", min_ok,
                  "budget-relative, degree <= " + std::to_string(entry.guess.max_degree));
      } else {
        add_check(rep, "guess", false, "no operator found within budget");
      }
    }
    if (have_op && entry.expect.order)
      add_check(rep, "order", L.order() == *entry.expect.order,
                "got " + std::to_string(L.order()) + ", expected " +
                    std::to_string(*entry.expect.order));

    // 3. local analysis
    bool adjoint_ok = true;
    if (have_op) {
      if (entry.expect.mum) {
        bool m = is_MUM(L);
        rep.computed["mum"] = m ? "true" : "false";
        add_check(rep, "mum", m == *entry.expect.mum);
      }
      int n = -1;
      if (entry.expect.log_power || entry.expect.nv) {
        n = max_log_power(L, AnalysisPoint::origin());
        rep.computed["log_power"] = std::to_string(n);
      }
      if (entry.expect.log_power)
        add_check(rep, "log_power", n == *entry.expect.log_power,
                  "got " + std::to_string(n));

      // 4. adjoint-homomorphism gate
      if (entry.adjoint) {
        AdjointVerdict v = adjoint_homomorphic(L, entry.adjoint->max_order,
                                               entry.adjoint->max_degree);
        adjoint_ok = v.found;
        rep.computed["adjoint_homomorphic"] =
            v.found ? ("found (twist degree " + std::to_string(v.twist.degree()) + ")")
                    : "not found within budget";
        add_check(rep, "adjoint_homomorphic", v.found == entry.adjoint->expect_found);
        if (!v.found) rep.computed["conjecture_status"] = "hypothesis not met";
      }
      if (entry.expect.nv) {
        if (!entry.adjoint || adjoint_ok)
          add_check(rep, "predicted_nv", n + 2 == *entry.expect.nv,
                    "n + 2 = " + std::to_string(n + 2));
        else
          rep.computed["predicted_nv"] =
              "not reported: adjoint-homomorphism hypothesis not met";
      }

      // 5. signature
      if (entry.expect.signature) {
        GaloisSignature sig = galois_signature(L);
        rep.computed["signature"] = sig_name(sig.kind);
        rep.computed["signature_evidence"] = sig.evidence;
        if (sig.ext2_order >= 0) rep.computed["ext2_order"] = std::to_string(sig.ext2_order);
        if (sig.sym2_order >= 0) rep.computed["sym2_order"] = std::to_string(sig.sym2_order);
        add_check(rep, "signature", sig_name(sig.kind) == *entry.expect.signature,
                  sig.evidence);
        if (entry.expect.ext2_order)
          add_check(rep, "ext2_order", sig.ext2_order == *entry.expect.ext2_order,
                    "got " + std::to_string(sig.ext2_order));
        if (entry.expect.sym2_order) {
          long got = sig.sym2_order;
          if (got < 0) {
            auto s = sym_square(L);
            got = s.order;
          }
          add_check(rep, "sym2_order", got == *entry.expect.sym2_order,
                    "got " + std::to_string(got));
        }
      }

      // 6. CY pipeline
      if (entry.cy) {
        CYReport cy = cy_check(L, entry.cy->terms);
        add_check(rep, "cy_all_pass", cy.all_pass, cy.notes);
        add_check(rep, "cy_n0", cy.n0 == entry.cy->n0,
                  "got n0 = " + std::to_string(cy.n0));
      }

      // 7. factorization checks
      for (const auto& fc : entry.factor_checks) {
        DiffOp R;
        std::string label;
        if (!fc.right_factor_file.empty()) {
          R = load_operator_file(data_dir, fc.right_factor_file);
          label = fc.right_factor_file;
        } else {
          auto sub = CoefficientOracle::from_term(fc.right_factor_term);
          TruncSeries s(oracle_prefix(sub, fc.factor_terms));
          GuessConfig g;
          g.max_order = 4;
          g.max_degree = 12;
          auto res = guess_min_ode(s, g);
          if (!res) {
            add_check(rep, "right_factor", false, "factor series not D-finite in budget");
            continue;
          }
          R = res->op;
          label = "guessed order-" + std::to_string(R.order()) + " factor";
        }
        add_check(rep, "right_factor_" + label, right_divides(R, L));
      }

      // frobenius staircase shape
      if (!entry.frobenius_shape.empty()) {
        FrobeniusBasis b = frobenius_basis(L, AnalysisPoint::origin(), 10);
        bool ok = b.groups.size() == entry.frobenius_shape.size();
        for (std::size_t i = 0; ok && i < b.groups.size(); ++i) {
          // shape entries sorted like the basis: depth descending
          ok = (int)b.groups[i].size() == entry.frobenius_shape[i].depth &&
               b.groups[i].back().exponent == entry.frobenius_shape[i].exponent;
        }
        add_check(rep, "frobenius_shape", ok);
      }

      // solution structure at infinity
      if (entry.infinity) {
        DiffOp Linf = op_at_infinity(L);
        FrobeniusBasis b = frobenius_basis(Linf, AnalysisPoint::origin(),
                                           (long)entry.infinity->top_series_prefix.size() + 4);
        // deepest staircase top layer
        const LogSeries& top = b.groups.front().back();
        const TruncSeries& s0 = top.layers.back();
        bool ok = true;
        // compare starting at the exponent: prefix[i] is the coefficient of
        // t^{rho + i}
        for (std::size_t i = 0; i < entry.infinity->top_series_prefix.size(); ++i)
          if (s0[i] != entry.infinity->top_series_prefix[i]) ok = false;
        add_check(rep, "infinity_top_series", ok,
                  "exponent " + to_string(top.exponent) +
                      ", log depth " + std::to_string(top.log_power()));
      }
    }

    // 8. p-curvature checks
    if (entry.p_curvature) {
      DiffOp M = load_operator_file(data_dir, entry.p_curvature->operator_file);
      for (std::size_t i = 0; i < entry.p_curvature->primes.size(); ++i) {
        bool z = p_curvature_is_zero(M, entry.p_curvature->primes[i]);
        add_check(rep, "p_curvature_" + std::to_string(entry.p_curvature->primes[i]),
                  z == entry.p_curvature->expect[i], z ? "zero" : "nonzero");
      }
    }

    // 9. pullback identity
    if (entry.pullback) {
      long n = entry.pullback->terms;
      auto base = CoefficientOracle::from_term(entry.pullback->base_term);
      TruncSeries base_s(oracle_prefix(base, n));
      TruncSeries pre = series_from_t_expression(entry.pullback->prefactor, n - 1);
      TruncSeries sub = series_from_t_expression(entry.pullback->substitution, n - 1);
      add_check(rep, "pullback_identity",
                pullback_identity_check(series, base_s, pre, sub, n));
    }

    // 10. boundedness
    if (entry.expect.bounded) {
      auto v = globally_bounded(series, std::min<long>(series.trunc_order(), 120));
      bool is_bounded = v.kind == BoundednessVerdict::Bounded;
      rep.computed["bounded"] =
          is_bounded ? "Bounded(" + to_string(v.rescale_constant) + ")"
                     : (v.kind == BoundednessVerdict::UnboundedEvidence ? "UnboundedEvidence"
                                                                        : "Inconclusive");
      add_check(rep, "bounded", is_bounded == *entry.expect.bounded, v.note);
    }

    rep.status = rep.all_pass() ? "pass" : "fail";
  } catch (const std::exception& e) {
    rep.status = "error";
    rep.error = e.what();
  }
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

RunSummary run_all(const std::vector<CatalogEntry>& entries, const std::string& data_dir,
                   const std::string& filter, std::optional<Tier> tier, int threads)
{
  std::vector<const CatalogEntry*> selected;
  for (const auto& e : entries) {
    if (!filter.empty() && e.id.find(filter) == std::string::npos) continue;
    if (tier && e.tier != *tier) continue;
    selected.push_back(&e);
  }
  RunSummary sum;
  sum.reports.resize(selected.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= selected.size()) break;
      sum.reports[i] = run_entry(*selected[i], data_dir);
    }
  };
  int nt = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& r : sum.reports) {
    if (r.status == "pass") ++sum.passed;
    else if (r.status == "fail") ++sum.failed;
    else if (r.status == "reference") ++sum.reference;
    else ++sum.errors;
  }
  return sum;
}

std::string report_to_json(const RunSummary& s)
{
  json j;
  j["schema"] = "diagonals-report/1";
  j["summary"] = {{"pass", s.passed},
                  {"fail", s.failed},
                  {"reference", s.reference},
                  {"error", s.errors}};
  json entries = json::array();
  for (const auto& r : s.reports) {
    json e;
    e["id"] = r.id;
    e["status"] = r.status;
    e["runtime_seconds"] = r.runtime_seconds;
    if (!r.error.empty()) e["error"] = r.error;
    json checks = json::array();
    for (const auto& c : r.checks) {
      json cj;
      cj["name"] = c.name;
      cj["pass"] = c.pass;
      if (!c.detail.empty()) cj["detail"] = c.detail;
      checks.push_back(cj);
    }
    e["checks"] = checks;
    json comp;
    for (const auto& [k, v] : r.computed) comp[k] = v;
    e["computed"] = comp;
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j.dump(1);
}

std::string report_to_text(const RunSummary& s)
{
  std::ostringstream os;
  for (const auto& r : s.reports) {
    os << r.id << ": " << r.status;
    if (!r.error.empty()) os << " (" << r.error << ")";
    os << "  [" << (long)(r.runtime_seconds * 1000) << " ms]\n";
    for (const auto& c : r.checks)
      os << "    " << (c.pass ? "ok  " : "FAIL") << "  " << c.name
         << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    for (const auto& [k, v] : r.computed) os << "    .. " << k << " = " << v << "\n";
  }
  os << "summary: " << s.passed << " pass, " << s.failed << " fail, " << s.reference
     << " reference, " << s.errors << " error\n";
  return os.str();
}

} // namespace diag
