#ifndef DIAGONALS_CATALOG_HPP
#define DIAGONALS_CATALOG_HPP

#include <diagonals/calabi_yau.hpp>
#include <diagonals/diagonal.hpp>
#include <diagonals/frobenius.hpp>
#include <diagonals/guess.hpp>
#include <diagonals/opalgebra.hpp>
#include <diagonals/oracle.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace diag {

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& m) : std::runtime_error(m) {}
};

enum class Tier { Fast, Slow, Reference };

struct Expectations {
  std::optional<long> order;
  std::optional<int> log_power;
  std::optional<long> nv;
  std::optional<std::string> signature; // "Sp" | "SO" | "none"
  std::optional<bool> mum;
  std::optional<bool> bounded;
  std::vector<BigRat> series_prefix;
  std::optional<long> ext2_order, sym2_order;
};

struct AdjointCheck {
  long max_order = 2;
  long max_degree = 40;
  bool expect_found = true;
};

struct CyCheck {
  long terms = 8;
  long n0 = 1;
};

struct FactorCheck {
  std::string right_factor_file;  // operator JSON under data/operators
  std::string right_factor_term;  // or: guess the factor from this oracle term
  long factor_terms = 48;
};

struct PCurvatureCheck {
  std::string operator_file;
  std::vector<std::uint64_t> primes;
  std::vector<bool> expect;
};

struct PullbackCheck {
  std::string base_term;      // oracle of the base series
  std::string prefactor;      // DSL text in t
  std::string substitution;   // DSL text in t, zero constant term
  long terms = 6;
};

struct ShapeGroup {
  BigRat exponent;
  int depth = 1; // staircase length
};

struct InfinityCheck {
  std::vector<BigRat> top_series_prefix; // deepest-log series at t = infinity
};

struct CatalogEntry {
  std::string id;
  std::string source;
  Tier tier = Tier::Fast;
  std::string expr;                                // DSL text (may be a template)
  std::map<std::string, BigRat> params;
  std::optional<CoefficientOracle> oracle;
  std::string operator_file;                       // analyze this operator directly
  long terms = 24;
  GuessConfig guess;
  Expectations expect;
  std::optional<AdjointCheck> adjoint;
  std::optional<CyCheck> cy;
  std::vector<FactorCheck> factor_checks;
  std::optional<PCurvatureCheck> p_curvature;
  std::optional<PullbackCheck> pullback;
  std::vector<ShapeGroup> frobenius_shape;
  std::optional<InfinityCheck> infinity;
  std::string notes;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AnalysisReport {
  std::string id;
  std::string status; // "pass" | "fail" | "reference" | "error"
  std::vector<CheckResult> checks;
  std::map<std::string, std::string> computed;
  double runtime_seconds = 0;
  std::string error;

  bool all_pass() const
  {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

std::vector<CatalogEntry> load_catalog(const std::string& data_dir);
CatalogEntry entry_from_json_text(const std::string& text);

DiffOp load_operator_file(const std::string& data_dir, const std::string& name);

AnalysisReport run_entry(const CatalogEntry& entry, const std::string& data_dir);

struct RunSummary {
  std::vector<AnalysisReport> reports;
  int passed = 0, failed = 0, reference = 0, errors = 0;
};

RunSummary run_all(const std::vector<CatalogEntry>& entries, const std::string& data_dir,
                   const std::string& filter = "", std::optional<Tier> tier = std::nullopt,
                   int threads = 1);

std::string report_to_json(const RunSummary& s);
std::string report_to_text(const RunSummary& s);

// target(t) = prefactor(t) * base(substitution(t)), checked to n terms
bool pullback_identity_check(const TruncSeries& target, const TruncSeries& base,
                             const TruncSeries& prefactor, const TruncSeries& substitution,
                             long n_terms);

// parse a pure-t expression ("1/(1-t)", "(1-4*t)^(-1/2)", "t/(1-4*t)") into a
// truncated series
TruncSeries series_from_t_expression(const std::string& text, long order);

} // namespace diag

#endif // DIAGONALS_CATALOG_HPP
