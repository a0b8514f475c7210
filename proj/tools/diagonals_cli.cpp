#include <CLI11.hpp>
#include <json.hpp>

#include <diagonals/calabi_yau.hpp>
#include <diagonals/catalog.hpp>
#include <diagonals/diagonal.hpp>
#include <diagonals/frobenius.hpp>
#include <diagonals/guess.hpp>
#include <diagonals/opalgebra.hpp>
#include <diagonals/oracle.hpp>
#include <diagonals/ratfun_guess.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace diag;

namespace {

std::string data_dir_default()
{
  if (const char* env = std::getenv("DIAGONALS_DATA")) return env;
  return "data";
}

std::string slurp(const std::string& path)
{
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DiffOp load_op_arg(const std::string& arg, const std::string& data)
{
  if (std::filesystem::exists(arg)) return op_from_json(slurp(arg));
  return load_operator_file(data, arg);
}

TruncSeries series_arg(const std::string& arg, long terms)
{
  if (std::filesystem::exists(arg)) {
    // one coefficient per line, p or p/q
    std::ifstream in(arg);
    std::vector<BigRat> c;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      c.push_back(rat_from_string(line));
    }
    return TruncSeries(std::move(c));
  }
  if (arg.rfind("sum[", 0) == 0)
    return TruncSeries(oracle_prefix(CoefficientOracle::from_term(arg), terms));
  return diagonal(parse(arg), terms, DiagEngine::Fast);
}

void print_series(const TruncSeries& s, long n)
{
  for (long i = 0; i <= std::min<long>(n - 1, s.trunc_order()); ++i)
    std::cout << to_string(s[i]) << "\n";
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"diagonals: exact diagonals of rational-power functions, their "
               "minimal annihilating operators, and the conjecture-verification catalog"};
  app.require_subcommand(1);
  std::string data = data_dir_default();
  app.add_option("--data", data, "data directory (catalog + operators)");

  auto* c_diag = app.add_subcommand("diag", "expand a diagonal series");
  std::string diag_expr;
  long diag_terms = 8;
  bool diag_oracle_check = false;
  std::string diag_engine = "fast";
  c_diag->add_option("expr", diag_expr, "expression in the DSL")->required();
  c_diag->add_option("--terms", diag_terms, "number of coefficients");
  c_diag->add_flag("--oracle-check", diag_oracle_check,
                   "also run the brute-force engine and compare");
  c_diag->add_option("--engine", diag_engine, "fast | brute | both");

  auto* c_guess = app.add_subcommand("guess", "guess the minimal annihilating operator");
  std::string guess_input;
  long guess_terms = 48, guess_max_order = 12, guess_max_degree = 60, guess_guard = 8;
  bool guess_theta = false;
  c_guess->add_option("input", guess_input, "series file, DSL expression, or sum[...] term")
      ->required();
  c_guess->add_option("--terms", guess_terms, "series length when computed from an expression");
  c_guess->add_option("--max-order", guess_max_order);
  c_guess->add_option("--max-degree", guess_max_degree);
  c_guess->add_option("--guard", guess_guard, "extra checked coefficients");
  c_guess->add_flag("--theta", guess_theta, "serialize in theta form");

  auto* c_an = app.add_subcommand("analyze", "local analysis of an operator");
  std::string an_op, an_point = "0";
  long an_terms = 8;
  c_an->add_option("op", an_op, "operator JSON file")->required();
  c_an->add_option("--point", an_point, "rational point or 'inf'");
  c_an->add_option("--terms", an_terms, "series terms in the basis display");

  auto* c_cl = app.add_subcommand("classify", "Galois signature and adjoint homomorphism");
  std::string cl_op;
  long cl_worder = -1, cl_wdegree = 40;
  c_cl->add_option("op", cl_op)->required();
  c_cl->add_option("--max-order", cl_worder, "intertwiner order budget");
  c_cl->add_option("--max-degree", cl_wdegree, "intertwiner degree budget");

  auto* c_cy = app.add_subcommand("cy", "Calabi-Yau invariant pipeline");
  std::string cy_op;
  long cy_terms = 12;
  c_cy->add_option("op", cy_op)->required();
  c_cy->add_option("--terms", cy_terms);

  auto* c_rg = app.add_subcommand("ratguess",
                                  "factorial term -> candidate denominator polynomial");
  std::string rg_input;
  long rg_vars = 5, rg_verify = 5;
  c_rg->add_option("term", rg_input, "term file or inline sum[...] text")->required();
  c_rg->add_option("--vars", rg_vars, "number of variables");
  c_rg->add_option("--verify-terms", rg_verify);

  auto* c_cat = app.add_subcommand("catalog", "run the example catalog");
  auto* c_run = c_cat->add_subcommand("run", "run entries");
  std::string cat_filter, cat_tier, cat_out = "report.json";
  int cat_threads = 1;
  c_run->add_option("--filter", cat_filter, "substring filter on entry ids");
  c_run->add_option("--tier", cat_tier, "fast | slow | reference");
  c_run->add_option("--threads", cat_threads);
  c_run->add_option("--out", cat_out, "write the JSON report here");
  auto* c_list = c_cat->add_subcommand("list", "list entries");

  auto* c_rep = app.add_subcommand("report", "render a report file");
  std::string rep_in = "report.json", rep_format = "text";
  c_rep->add_option("--in", rep_in);
  c_rep->add_option("--format", rep_format, "json | text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_diag) {
      DiagEngine e = diag_engine == "brute"  ? DiagEngine::BruteForce
                     : diag_engine == "both" ? DiagEngine::Both
                                             : DiagEngine::Fast;
      if (diag_oracle_check) e = DiagEngine::Both;
      QExpr q = parse(diag_expr);
      TruncSeries s = diagonal(q, diag_terms, e);
      print_series(s, diag_terms);
      return 0;
    }
    if (*c_guess) {
      TruncSeries s = series_arg(guess_input, guess_terms);
      GuessConfig cfg;
      cfg.max_order = guess_max_order;
      cfg.max_degree = guess_max_degree;
      cfg.guard_terms = guess_guard;
      auto res = guess_min_ode(s, cfg);
      if (!res) {
        std::cerr << "no operator found within (order <= " << guess_max_order
                  << ", degree <= " << guess_max_degree << ")\n";
        return 1;
      }
      std::cerr << "order " << res->order << ", degree " << res->degree << ", minimality "
                << (min_order_certificate(s, res->op, cfg) ? "certified in budget"
                                                           : "not certified")
                << "\n";
      std::cout << op_to_json(res->op, guess_theta) << "\n";
      return 0;
    }
    if (*c_an) {
      DiffOp L = load_op_arg(an_op, data);
      AnalysisPoint pt = an_point == "inf" || an_point == "infinity"
                             ? AnalysisPoint::infinity()
                             : AnalysisPoint::at(rat_from_string(an_point));
      IndicialData d = indicial(L, pt);
      std::cout << "operator order " << L.order() << ", point " << pt.to_string() << "\n";
      std::cout << "indicial roots:";
      for (const auto& [r, m] : d.rational_roots)
        std::cout << " " << to_string(r) << (m > 1 ? "(x" + std::to_string(m) + ")" : "");
      std::cout << "\n";
      for (const auto& f : d.irrational_factors)
        std::cout << "irrational factor: " << f.to_string("r") << "\n";
      FrobeniusBasis b = frobenius_basis(L, pt, an_terms);
      std::cout << "MUM: " << (is_MUM(L) ? "yes" : "no") << "\n";
      std::cout << "max log power n = " << b.max_log_power() << ", predicted N_v = "
                << b.max_log_power() + 2 << "\n";
      for (const auto& g : b.groups) {
        std::cout << "staircase at exponent " << to_string(g.back().exponent) << ", depth "
                  << g.size() << ":\n";
        for (const auto& sol : g) std::cout << "  " << to_string(sol, 4) << "\n";
      }
      return 0;
    }
    if (*c_cl) {
      DiffOp L = load_op_arg(cl_op, data);
      GaloisSignature sig = galois_signature(L);
      std::cout << "order " << L.order() << "\n";
      std::cout << "signature: "
                << (sig.kind == GaloisSignature::SymplecticSignature   ? "Sp"
                    : sig.kind == GaloisSignature::OrthogonalSignature ? "SO"
                                                                       : "none")
                << "  (" << sig.evidence << ")\n";
      AdjointVerdict v = adjoint_homomorphic(L, cl_worder, cl_wdegree);
      if (v.found)
        std::cout << "adjoint-homomorphic: yes (twist "
                  << (v.twist.degree() == 0 ? "none" : v.twist.to_string("t"))
                  << ", intertwiner order " << v.witness->W.order() << ")\n";
      else
        std::cout << "adjoint-homomorphic: not found within (order <= " << v.order_budget
                  << ", degree <= " << v.degree_budget << ")\n";
      return 0;
    }
    if (*c_cy) {
      DiffOp L = load_op_arg(cy_op, data);
      CYReport r = cy_check(L, cy_terms);
      std::cout << "MUM: " << (r.mum ? "yes" : "no") << "\n";
      if (!r.mum) return 1;
      std::cout << "exponents at infinity:";
      for (const auto& e : r.infinity_exponents) std::cout << " " << to_string(e);
      std::cout << "\npairing: " << (r.exponent_pairing ? "yes" : "no") << "\n";
      std::cout << "nome:       " << nome(L, cy_terms).to_string("t", 6) << "\n";
      std::cout << "mirror map: " << mirror_map(L, cy_terms).to_string("q", 6) << "\n";
      std::cout << "yukawa:     " << yukawa(L, cy_terms).to_string("q", 6) << "\n";
      std::cout << "instantons:";
      for (const auto& n : r.instantons) std::cout << " " << to_string(n);
      std::cout << "\nn0 = " << r.n0 << ", all checks " << (r.all_pass ? "pass" : "FAIL")
                << "\n";
      return r.all_pass ? 0 : 1;
    }
    if (*c_rg) {
      std::string text = std::filesystem::exists(rg_input) ? slurp(rg_input) : rg_input;
      FactorialTerm term = parse_factorial_term(text);
      MonomialConstraintSet cs = derive_constraints(term);
      std::cerr << cs.slots.size() << " monomials, " << cs.relations.size() << " relations"
                << (cs.product_template ? " (product template)" : "") << "\n";
      auto oracle = [&](long n) { return eval_factorial_term(term, n); };
      auto q = assign_monomials(cs, rg_vars, [&](const QExpr& cand) {
        return verify_candidate(cand, oracle, rg_verify);
      });
      if (!q) {
        std::cerr << "no verified assignment with " << rg_vars << " variables\n";
        return 1;
      }
      std::cout << print(*q) << "\n";
      std::cerr << "verified against the term oracle for " << rg_verify << " terms\n";
      return 0;
    }
    if (*c_cat) {
      auto entries = load_catalog(data);
      if (*c_list) {
        for (const auto& e : entries)
          std::cout << e.id << "  ["
                    << (e.tier == Tier::Fast   ? "fast"
                        : e.tier == Tier::Slow ? "slow"
                                               : "reference")
                    << "]  " << e.source << "\n";
        return 0;
      }
      std::optional<Tier> tier;
      if (cat_tier == "fast") tier = Tier::Fast;
      else if (cat_tier == "slow") tier = Tier::Slow;
      else if (cat_tier == "reference") tier = Tier::Reference;
      auto sum = run_all(entries, data, cat_filter, tier, cat_threads);
      std::ofstream out(cat_out);
      out << report_to_json(sum);
      std::cout << report_to_text(sum);
      std::cout << "json report written to " << cat_out << "\n";
      return sum.failed + sum.errors ? 1 : 0;
    }
    if (*c_rep) {
      std::string text = slurp(rep_in);
      if (rep_format == "json") {
        std::cout << text;
        return 0;
      }
      auto j = nlohmann::json::parse(text);
      RunSummary s;
      for (const auto& e : j.at("entries")) {
        AnalysisReport r;
        r.id = e.at("id").get<std::string>();
        r.status = e.at("status").get<std::string>();
        r.runtime_seconds = e.value("runtime_seconds", 0.0);
        r.error = e.value("error", "");
        for (const auto& c : e.at("checks"))
          r.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(),
                              c.value("detail", "")});
        if (e.contains("computed"))
          for (auto& [k, v] : e.at("computed").items()) r.computed[k] = v.get<std::string>();
        s.reports.push_back(std::move(r));
        const std::string& st = s.reports.back().status;
        if (st == "pass") ++s.passed;
        else if (st == "fail") ++s.failed;
        else if (st == "reference") ++s.reference;
        else ++s.errors;
      }
      std::cout << report_to_text(s);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
