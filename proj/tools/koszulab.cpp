// koszulab -- exact chain-level computations for chiral Koszul duality on a
// finite Ran model: theorem suites, individual constructions, and the
// Atiyah-Bott Poincare series.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "koszulab/cobar.hpp"
#include "koszulab/verifysuite.hpp"

using namespace koszulab;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open input file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InvalidInputError("bad JSON in '" + path + "': " + e.what());
  }
  return j;
}

int default_parallelism() {
  if (const char* env = std::getenv("KOSZULAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

std::vector<int> parse_exponents(const std::string& s) {
  std::vector<int> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoi(cur));
      cur.clear();
    } else
      cur += c;
  }
  if (!cur.empty()) out.push_back(std::stoi(cur));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"koszulab: exact Koszul duality laboratory on a finite Ran model"};
  app.require_subcommand(1);

  // --- suite ---
  auto* suite = app.add_subcommand("suite", "list or run verification suites");
  suite->require_subcommand(1);
  suite->add_subcommand("list", "list registered suites");
  auto* run = suite->add_subcommand("run", "run a suite (or 'all')");
  std::string suite_name;
  bool as_json = false;
  uint64_t seed = SuiteConfig{}.seed;
  int parallelism = default_parallelism();
  run->add_option("name", suite_name, "suite name or 'all'")->required();
  run->add_flag("--json", as_json, "emit the JSON report instead of the table");
  run->add_option("--seed", seed, "report seed (recorded; suites are deterministic)");
  run->add_option("--parallel", parallelism, "number of worker threads");

  // --- compute ---
  auto* compute = app.add_subcommand("compute", "run one construction from a JSON input");
  std::string op, in_path;
  std::vector<int> window_bounds;
  int max_weight = 0, stage = 1;
  compute->add_option("op", op, "chev | cochev | prim | cobar-stage")->required();
  compute->add_option("--in", in_path, "input structure JSON")->required();
  compute->add_option("--window", window_bounds, "degree window lo hi")->expected(2);
  compute->add_option("--max-weight", max_weight, "weight cutoff override");
  compute->add_option("--stage", stage, "tower stage for cobar-stage");

  // --- ran ---
  auto* ran = app.add_subcommand("ran", "finite Ran model operations");
  std::string ran_op, ran_in;
  int max_card = 0;
  ran->add_option("op", ran_op, "factor-check | dual | cstar")->required();
  ran->add_option("--in", ran_in, "input JSON")->required();
  ran->add_option("--max-card", max_card, "cardinality cutoff for cstar");

  // --- ab-series ---
  auto* ab = app.add_subcommand("ab-series", "Atiyah-Bott Poincare series coefficients");
  std::string exponents_arg;
  int genus = 0, order = 0;
  ab->add_option("--exponents", exponents_arg, "comma-separated exponents, e.g. 1,2")->required();
  ab->add_option("--genus", genus, "curve genus")->required();
  ab->add_option("--order", order, "truncation order")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (suite->parsed()) {
      if (suite->get_subcommand("list")->parsed()) {
        for (const auto& n : suite_names()) std::cout << n << "\n";
        return 0;
      }
      SuiteConfig cfg;
      cfg.seed = seed;
      cfg.parallelism = parallelism;
      std::vector<VerificationReport> reports;
      if (suite_name == "all") {
        reports = run_all_suites(cfg);
      } else {
        reports.push_back(run_suite(suite_name, cfg));
      }
      bool ok = true;
      if (as_json) {
        json out = json::array();
        for (const auto& r : reports) out.push_back(r.to_json());
        std::cout << out.dump(2) << "\n";
      } else {
        for (const auto& r : reports) std::cout << r.to_table();
      }
      for (const auto& r : reports) ok = ok && r.all_ok();
      return ok ? 0 : 1;
    }

    if (compute->parsed()) {
      json input = load_json(in_path);
      CutoffPolicy pol;
      if (window_bounds.size() == 2) {
        pol.window = Window(window_bounds[0], window_bounds[1], 2);
      } else if (input.contains("cutoff")) {
        pol = cutoff_from_json(input.at("cutoff"));
      } else {
        throw InvalidInputError("--window lo hi is required (no cutoff in the input)");
      }
      if (max_weight > 0) pol.max_weight = max_weight;
      std::string type = structure_type(input);
      if (op == "chev") {
        if (type != "lie") throw InvalidInputError("compute chev expects {\"type\": \"lie\"}");
        std::cout << to_json(chevalley(lie_from_json(input), pol)).dump(2) << "\n";
      } else if (op == "cochev") {
        if (type != "colie") throw InvalidInputError("compute cochev expects {\"type\": \"colie\"}");
        std::cout << to_json(cochevalley(colie_from_json(input), pol)).dump(2) << "\n";
      } else if (op == "prim") {
        if (type != "comcoalg")
          throw InvalidInputError("compute prim expects {\"type\": \"comcoalg\"}");
        std::cout << to_json(prim_lie(comcoalg_from_json(input), pol)).dump(2) << "\n";
      } else if (op == "cobar-stage") {
        if (type != "comcoalg")
          throw InvalidInputError("compute cobar-stage expects {\"type\": \"comcoalg\"}");
        Complex st = cobar_stage(comcoalg_from_json(input), stage, pol);
        json out = {{"stage", stage}, {"complex", to_json(st)}, {"cutoff", to_json(pol)}};
        std::cout << out.dump(2) << "\n";
      } else {
        throw InvalidInputError("unknown compute op '" + op + "'");
      }
      return 0;
    }

    if (ran->parsed()) {
      json input = load_json(ran_in);
      if (ran_op == "factor-check") {
        std::string type = structure_type(input);
        std::optional<FactorizationWitness> wit;
        Window w(0, 0);
        if (type == "comalg") {
          StrictComAlgebra b = comalg_from_json(input);
          w = b.cutoff.window;
          wit = is_factorization_algebra(b, Window(w.lo, w.hi));
        } else if (type == "comcoalg") {
          StrictComCoalgebra a = comcoalg_from_json(input);
          w = a.cutoff.window;
          wit = is_factorization_coalgebra(a, Window(w.lo, w.hi));
        } else {
          throw InvalidInputError("factor-check expects a comalg or comcoalg input");
        }
        json out = {{"factorizable", !wit}};
        if (wit) out["witness"] = to_json(*wit);
        std::cout << out.dump(2) << "\n";
        return wit ? 1 : 0;
      }
      if (ran_op == "dual") {
        BaseObject v = baseobject_from_json(input);
        std::cout << to_json(verdier_dual(v)).dump(2) << "\n";
        return 0;
      }
      if (ran_op == "cstar") {
        BaseObject v = baseobject_from_json(input);
        std::optional<int> cut;
        if (max_card > 0) cut = max_card;
        std::cout << to_json(compactly_supported_cohomology(v, cut)).dump(2) << "\n";
        return 0;
      }
      throw InvalidInputError("unknown ran op '" + ran_op + "'");
    }

    if (ab->parsed()) {
      std::vector<Integer> coeffs =
          atiyah_bott_series(parse_exponents(exponents_arg), genus, order);
      for (size_t i = 0; i < coeffs.size(); ++i) {
        if (i) std::cout << ",";
        std::cout << coeffs[i];
      }
      std::cout << "\n";
      return 0;
    }
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownSuiteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
