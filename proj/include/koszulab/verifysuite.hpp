#pragma once

#include "koszulab/cobar.hpp"
#include "koszulab/filtrations.hpp"
#include "koszulab/free_lie.hpp"
#include "koszulab/json_io.hpp"
#include "koszulab/ranmodel.hpp"

namespace koszulab {

struct UnknownSuiteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SuiteConfig {
  Window connective{-8, -1, 2};
  Window coconnective{1, 8, 2};
  uint64_t seed = 0x5eed;
  int parallelism = 1;
};

struct CaseResult {
  std::string name;
  bool expected_failure = false;
  bool passed = false;  // raw outcome of the checked statement
  std::string detail;
  json data = json::object();  // cohomology tables, witnesses, cutoffs
  double seconds = 0.0;
  bool ok() const { return expected_failure ? !passed : passed; }
};

struct VerificationReport {
  std::string suite;
  std::vector<CaseResult> cases;
  uint64_t seed = 0;

  bool all_ok() const;
  json to_json() const;          // timing-free, byte-stable across runs
  std::string to_table() const;  // human-readable, includes timings
};

std::vector<std::string> suite_names();
VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg = {});
std::vector<VerificationReport> run_all_suites(const SuiteConfig& cfg = {});

// Integer audits of the inequality chains for general dimension d, including
// the d >= 1 constants the finite sheaf model cannot witness.
VerificationReport bound_audit(int max_d, int max_size, int max_parts, int max_stage);

// Coefficients of the Poincare series of Sym(C^*(curve) (x) M) where M has
// generators in degrees 2e per exponent e:
//   prod_e (1 + t^{2e+1})^{2g} / ((1 - t^{2e})(1 - t^{2e+2})).
std::vector<Integer> atiyah_bott_series(const std::vector<int>& exponents, int genus, int order);

// --- the fixed corpus (version 1) -------------------------------------------

Complex line_complex(const std::string& label, int degree);

std::vector<std::string> corpus_lie_names();
StrictLieAlgebra corpus_lie(const std::string& name);

std::vector<std::string> corpus_coalgebra_names();
StrictComCoalgebra corpus_coalgebra(const std::string& name, const Window& w);

std::vector<std::string> corpus_family_names();
DiagonalLieFamily corpus_family(const std::string& name);

// Off-diagonal counterexample inputs: abelian objects supported on {a,b}.
StrictLieAlgebra offdiagonal_lie();
StrictCoLie offdiagonal_colie();

}  // namespace koszulab
