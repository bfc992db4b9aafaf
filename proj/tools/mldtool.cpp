#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <random>

#include "wbmld/blowup.hpp"
#include "wbmld/errors.hpp"
#include "wbmld/jets.hpp"
#include "wbmld/problem.hpp"
#include "wbmld/report.hpp"
#include "wbmld/search.hpp"
#include "wbmld/wps.hpp"

using namespace wbmld;

namespace {

enum ExitCode { kOk = 0, kParse = 2, kDomain = 3, kInvariant = 4 };

Weight parse_weight(std::string text) {
  std::string digits;
  for (char c : text)
    if (c != '(' && c != ')' && c != ' ') digits += c;
  std::vector<int> entries;
  std::size_t pos = 0;
  while (pos <= digits.size()) {
    std::size_t comma = digits.find(',', pos);
    std::string part = digits.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("malformed weight '" + text + "'");
    entries.push_back(std::stoi(part));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return Weight(entries);
}

struct Common {
  std::string problem;
  bool decimal = false;
  bool timing = false;
};

void emit(const Json& command, Json result, const Common& c, std::chrono::steady_clock::time_point start) {
  Json report = run_report(command, std::move(result));
  if (c.timing)
    report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::cout << report.dump(2) << "\n";
}

Json echo(const std::string& name, const ProblemFile& pf) {
  Json j;
  j["name"] = name;
  j["problem"] = pf.serialize();
  return j;
}

int cmd_eval_plan(const Common& c, const std::string& plan_path) {
  auto start = std::chrono::steady_clock::now();
  ProblemFile pf = ProblemFile::read(c.problem);
  BlowupPlan plan = parse_plan(read_text_file(plan_path), pf.dimension);
  DivisorRecord rec = evaluate_plan(pf.ideal(), plan);
  for (const auto& line : rec.trace) std::cerr << line << "\n";
  Json cmd = echo("eval-plan", pf);
  cmd["plan"] = plan.str();
  emit(cmd, to_json(rec, {c.decimal, false}), c, start);
  return kOk;
}

int cmd_mld(const Common& c, bool log, int jobs, int bound, int depth) {
  auto start = std::chrono::steady_clock::now();
  ProblemFile pf = ProblemFile::read(c.problem);
  SearchOptions opt{bound > 0 ? bound : pf.weight_bound, depth >= 0 ? depth : pf.catalog_depth, jobs};
  MldResult r = mld(pf.ideal(), opt);
  DivisorRecord check = evaluate_plan(pf.ideal(), parse_plan(r.witness_plan.str(), pf.dimension));
  if (check.log_discrepancy != r.witness_value) throw InvariantError("witness plan does not re-evaluate to the reported value");
  for (const auto& n : r.notes) std::cerr << n << "\n";
  std::cerr << "mld = " << r.value.str() << (r.certified ? " (certified)" : " (upper bound)") << "\n";
  Json cmd = echo("mld", pf);
  cmd["weight_bound"] = opt.weight_bound;
  cmd["catalog_depth"] = opt.catalog_depth;
  emit(cmd, to_json(r, {c.decimal, log}), c, start);
  return kOk;
}

int cmd_check(const Common& c, const std::string& what, const std::string& plan_path, const std::string& weight_text, int n,
              int cases) {
  auto start = std::chrono::steady_clock::now();
  ProblemFile pf = ProblemFile::read(c.problem);
  RealIdeal a = pf.ideal();
  Json cmd = echo("check", pf);
  cmd["what"] = what;
  Json result;
  if (what == "generality") {
    BlowupStep first;
    std::optional<BlowupStep> second;
    if (!plan_path.empty()) {
      BlowupPlan plan = parse_plan(read_text_file(plan_path), pf.dimension);
      if (plan.steps.size() > 2) throw DomainError("generality is checked for plans of at most two steps");
      first = plan.steps[0];
      if (plan.steps.size() == 2) second = plan.steps[1];
      cmd["plan"] = plan.str();
    } else if (!weight_text.empty()) {
      first.weight = parse_weight(weight_text);
    } else {
      auto sw = standard_weight_infer(a, pf.catalog_depth, pf.weight_bound);
      first.weight = sw.weight;
      if (sw.system != identity_images(3)) first.recentering = sw.system;
      result["standard_weight"] = to_json(sw, {c.decimal, false});
    }
    first.center = CenterSpec::origin();
    auto g = generality_check(a, first, second);
    for (const auto& w : g.witnesses)
      std::cerr << "condition " << w.condition << ": " << (w.curve ? w.curve->str() : "no bad curve") << ", ord "
                << w.order.str() << (w.holds ? " <= 1" : " > 1") << " (" << w.reason << ")\n";
    result["first_step"] = first.str();
    result["generality"] = to_json(g, {c.decimal, false});
    result["pass"] = g.general;
  } else if (what == "bezout") {
    std::mt19937_64 rng(pf.seed);
    std::vector<Weight> weights{Weight{2, 2, 3}, Weight{1, 1, 1}, Weight{1, 1, 2}, Weight{1, 1, 3}, Weight{1, 1, 4}, Weight{1, 1, 5}};
    int passed = 0;
    Json failures = Json::array();
    for (int i = 0; i < cases; ++i) {
      const Weight& w = weights[i % weights.size()];
      auto inst = random_bezout_instance(w, rng);
      if (bezout_bound_check(inst.g, inst.L, inst.Q)) {
        ++passed;
      } else {
        Json f;
        f["weight"] = to_json(w);
        f["g"] = inst.g.str();
        f["L"] = inst.L.str();
        f["ord"] = restriction_order(inst.g, inst.L, inst.Q);
        failures.push_back(f);
      }
    }
    std::cerr << passed << "/" << cases << " Bezout cases pass\n";
    result["cases"] = cases;
    result["passed"] = passed;
    result["failures"] = failures;
    result["pass"] = passed == cases;
  } else if (what == "codim") {
    Weight w;
    if (!weight_text.empty()) {
      w = parse_weight(weight_text);
    } else {
      w = standard_weight_infer(a, pf.catalog_depth, pf.weight_bound).weight;
    }
    int codim = contact_cylinder_codim({w, n});
    int expected = n * w.sum();
    std::cerr << "codim of the contact cylinder " << w.str() << ", n=" << n << ": " << codim << "\n";
    result["weight"] = to_json(w);
    result["n"] = n;
    result["codim"] = codim;
    result["n_times_kE_plus_1"] = expected;
    result["pass"] = codim == expected;
  } else {
    throw ParseError("unknown check '" + what + "'");
  }
  emit(cmd, result, c, start);
  return kOk;
}

int cmd_oracle(const Common& c, const std::string& weight_text, int trials) {
  auto start = std::chrono::steady_clock::now();
  ProblemFile pf = ProblemFile::read(c.problem);
  Weight w = parse_weight(weight_text);
  if (w.size() != pf.dimension) throw DomainError("weight length does not match the dimension");
  Json cmd = echo("oracle", pf);
  cmd["weight"] = to_json(w);
  Json rows = Json::array();
  bool all = true;
  std::mt19937_64 rng(pf.seed);
  for (const auto& f : pf.factors)
    for (const auto& g : f.generators) {
      if (g.is_zero()) continue;
      auto arc = generic_arc_order(g, w.entries(), trials, rng);
      int direct = weighted_order(g, w);
      Json row;
      row["generator"] = g.str();
      row["weighted_order"] = direct;
      row["arc_order"] = arc.order;
      row["rounds"] = arc.rounds;
      row["degenerate_warning"] = arc.degenerate_warning;
      all = all && direct == arc.order;
      std::cerr << g.str() << ": weighted order " << direct << ", arc order " << arc.order << "\n";
      rows.push_back(row);
    }
  Json result;
  result["generators"] = rows;
  put_rational(result, "ideal_order", ideal_order(pf.ideal(), w), {c.decimal, false});
  result["pass"] = all;
  emit(cmd, result, c, start);
  return kOk;
}

Json error_json(const std::string& kind, const std::string& message) {
  Json j;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted blow-up minimal log discrepancy tool"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", common.problem, "problem file")->required();
    sub->add_flag("--decimal", common.decimal, "add approximate decimals next to exact rationals");
    sub->add_flag("--timing", common.timing, "include wall-clock timing in the report");
  };

  std::string plan_path;
  auto* eval = app.add_subcommand("eval-plan", "evaluate a blow-up plan");
  add_common(eval);
  eval->add_option("plan", plan_path, "plan file")->required();

  bool log = false;
  int jobs = 1, bound = 0, depth = -1;
  auto* mldc = app.add_subcommand("mld", "search for the minimal log discrepancy");
  add_common(mldc);
  mldc->add_flag("--log", log, "include the full search log");
  mldc->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  mldc->add_option("--weight-bound", bound, "override option weight_bound")->check(CLI::PositiveNumber);
  mldc->add_option("--catalog-depth", depth, "override option catalog_depth")->check(CLI::NonNegativeNumber);

  std::string what, weight_text, check_plan;
  int n = 1, cases = 500, trials = 3;
  auto* check = app.add_subcommand("check", "generality, Bezout or contact-codimension checks");
  add_common(check);
  check->add_option("--what", what, "generality|bezout|codim")->required()->check(CLI::IsMember({"generality", "bezout", "codim"}));
  check->add_option("--plan", check_plan, "plan whose steps are checked for generality");
  check->add_option("--weight", weight_text, "weight such as (2,2,3)");
  check->add_option("--n", n, "contact order for codim")->check(CLI::PositiveNumber);
  check->add_option("--cases", cases, "number of random Bezout cases")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "compare generic arc orders with weighted orders");
  add_common(oracle);
  oracle->add_option("--weight", weight_text, "weight such as (1,1,2)")->required();
  oracle->add_option("--trials", trials, "arcs per round")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kParse;
  }

  try {
    if (*eval) return cmd_eval_plan(common, plan_path);
    if (*mldc) return cmd_mld(common, log, jobs, bound, depth);
    if (*check) return cmd_check(common, what, check_plan, weight_text, n, cases);
    if (*oracle) return cmd_oracle(common, weight_text, trials);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    Json j = error_json("parse", e.detail());
    j["error"]["line"] = e.line();
    j["error"]["column"] = e.column();
    std::cout << j.dump(2) << "\n";
    return kParse;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << error_json("domain", e.what()).dump(2) << "\n";
    return kDomain;
  } catch (const InvariantError& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    std::cout << error_json("invariant", e.what()).dump(2) << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    std::cout << error_json("invariant", e.what()).dump(2) << "\n";
    return kInvariant;
  }
  return kOk;
}
