// pfisterlab: isotropy checks, independence certificates, curve censuses and
// first-order sentence tooling over exact small fields.
//
// Exit codes: 0 decided/success, 1 usage or input error, 2 undecided within
// the configured budget, 3 internal cross-check disagreement.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pfl/formula.hpp"
#include "pfl/genforms.hpp"
#include "pfl/independence.hpp"
#include "pfl/report.hpp"

using namespace pfl;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void emit(const json& report) { std::cout << report.dump(2) << std::endl; }

int map_error_exit(const error& e) {
  switch (e.code()) {
    case errc::budget_exceeded:
      return 2;
    case errc::internal_disagreement:
      return 3;
    default:
      return 1;
  }
}

std::map<std::string, Value> parse_assignments(const FieldPtr& f, const std::string& text) {
  std::map<std::string, Value> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    auto eq = piece.find('=');
    if (eq == std::string::npos) fail(errc::bad_input, "assignment needs name=value: " + piece);
    std::string name = piece.substr(0, eq);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    size_t s = 0;
    while (s < name.size() && name[s] == ' ') ++s;
    out.emplace(name.substr(s), parse_element(f, piece.substr(eq + 1)));
  }
  return out;
}

std::vector<Value> parse_elements_list(const FieldPtr& f, const std::string& text) {
  std::vector<Value> out;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(parse_element(f, cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(parse_element(f, cur));
  return out;
}

std::string default_store_path() {
  const char* env = std::getenv("PFISTERLAB_STORE");
  return env ? env : "census_store.jsonl";
}

int cmd_isotropy(const std::string& field_text, const std::string& form_text, int bound,
                 uint64_t budget) {
  Timer timer;
  FieldPtr f = Field::parse(field_text);
  DiagonalForm q = parse_diagonal_form(f, form_text);
  json inputs{{"field", f->to_string()}, {"form", form_to_json(q)["coefficients"]}};
  if (f->is_finite()) {
    FiniteIsotropy r = isotropy_finite(q);
    json result{{"verdict", r.isotropic ? "Isotropic" : "Anisotropic"}, {"tried", r.tried}};
    if (r.isotropic) {
      json w = json::array();
      for (const auto& x : r.witness) w.push_back(x.to_string());
      result["witness"] = w;
    }
    emit(run_report("isotropy", inputs, result, timer.ms()));
    return 0;
  }
  inputs["bound"] = bound;
  BoundedSearchOutcome out = isotropy_bounded_search(q, bound, budget);
  json result = bounded_search_to_json(out);
  result["verdict"] = out.witness ? "Isotropic" : ("NoneFound(" + std::to_string(bound) + ")");
  emit(run_report("isotropy", inputs, result, timer.ms()));
  return out.witness ? 0 : 2;
}

int cmd_independent(const std::string& field_text, const std::string& elements_text,
                    const std::string& profile_name, int max_degree, int char2_ell) {
  Timer timer;
  FieldPtr K = Field::parse(field_text);
  if (K->kind() != FieldKind::RatFunc)
    fail(errc::bad_input, "--field must be a rational function field");
  std::vector<Value> u = parse_elements_list(K, elements_text);
  if (u.empty()) fail(errc::bad_input, "--elements is empty");

  BaseFieldProfile profile;
  if (profile_name == "finite")
    profile = profile_finite(K->base());
  else if (profile_name == "e0")
    profile = profile_surrogate_e0(K->base());
  else if (profile_name == "rationals")
    profile = profile_rationals();
  else if (profile_name == "auto") {
    if (!K->base()->is_finite())
      profile = profile_rationals();
    else if (K->base()->prime() == 2)
      profile = profile_surrogate_e0(K->base());
    else
      profile = profile_finite(K->base());
  } else {
    fail(errc::bad_input, "unknown profile " + profile_name);
  }

  IndependentOptions opts;
  opts.char2_ell = char2_ell;
  opts.limits.max_degree = max_degree;
  IndependenceReport rep = independent(u, profile, opts);

  json elements = json::array();
  for (const auto& x : u) elements.push_back(x.to_string());
  json inputs{{"field", K->to_string()},
              {"elements", elements},
              {"profile", profile.name},
              {"max_degree", max_degree},
              {"char2_ell", char2_ell}};
  emit(run_report("independent", inputs, independence_to_json(rep), timer.ms()));
  return rep.verdict == Verdict::Inconclusive ? 2 : 0;
}

int cmd_census(const std::string& family, int64_t qmax, const std::string& store_path, int jobs,
               const std::string& csv_path) {
  Timer timer;
  std::vector<FamilyKind> kinds;
  if (family == "all") {
    kinds = {FamilyKind::Quintic, FamilyKind::Septic, FamilyKind::Char2AS};
  } else {
    auto k = family_by_name(family);
    if (!k) fail(errc::bad_input, "unknown family " + family);
    kinds = {*k};
  }
  CensusStore store(store_path);
  ScanResult scan = derive_weil_threshold(kinds, qmax, jobs, &store);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << "family,q,a,n_points,s_a_size,s_a_covers_field,s_a_prime_covers_field\n";
    for (const auto& cell : scan.cells)
      csv << cell.family << "," << cell.q << "," << cell.a_index << "," << cell.n_points << ","
          << cell.s_a_size << "," << (cell.s_a_covers_field ? 1 : 0) << ","
          << ((cell.s_a_covers_field || cell.q <= scan.m) ? 1 : 0) << "\n";
  }
  json inputs{{"family", family}, {"qmax", qmax}, {"store", store_path}, {"jobs", jobs}};
  emit(run_report("census", inputs, scan_to_json(scan), timer.ms()));
  return 0;
}

int cmd_compact(const std::string& store_path) {
  Timer timer;
  CensusStore store(store_path);
  store.compact();
  emit(run_report("compact", json{{"store", store_path}},
                  json{{"cells", store.size()}}, timer.ms()));
  return 0;
}

std::string read_formula_input(const std::string& inline_text, const std::string& file) {
  if (!inline_text.empty()) return inline_text;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) fail(errc::bad_input, "cannot read " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::stringstream ss;
  ss << std::cin.rdbuf();
  return ss.str();
}

int cmd_formula_gen(const std::string& which, const std::string& family, int m, int e, int n,
                    int fold_ceiling, bool as_json) {
  Timer timer;
  auto kind = family_by_name(family);
  FormulaPtr phi;
  if (which == "sa") {
    if (!kind) fail(errc::bad_input, "unknown family " + family);
    phi = ratio_membership_formula(*kind);
  } else if (which == "sa-prime") {
    if (!kind) fail(errc::bad_input, "unknown family " + family);
    phi = ratio_membership_prime_formula(*kind, m);
  } else if (which == "constants") {
    if (!kind) fail(errc::bad_input, "unknown family " + family);
    phi = constants_formula(*kind, m);
  } else if (which == "coverage") {
    if (!kind) fail(errc::bad_input, "unknown family " + family);
    phi = coverage_sentence(*kind, m);
  } else if (which == "trdeg") {
    phi = trdeg_sentence(e, n, fold_ceiling);
  } else {
    fail(errc::bad_input, "unknown generator " + which);
  }
  if (as_json) {
    json inputs{{"which", which}, {"family", family}, {"m", m}, {"e", e}, {"n", n}};
    json result{{"formula", pretty_print(phi)},
                {"ast", formula_to_json(phi)},
                {"size", formula_size(phi)},
                {"quantifier_depth", quantifier_depth(phi)},
                {"free_variables", free_variables(phi)}};
    emit(run_report("formula gen", inputs, result, timer.ms()));
  } else {
    std::cout << pretty_print(phi) << std::endl;
  }
  return 0;
}

int cmd_formula_eval(const std::string& field_text, const std::string& inline_text,
                     const std::string& file, const std::string& assign, double budget,
                     int subfield_degree) {
  Timer timer;
  FieldPtr f = Field::parse(field_text);
  FormulaPtr phi = parse_formula(read_formula_input(inline_text, file));
  auto asg = parse_assignments(f, assign);
  EvalOptions opts;
  opts.budget = budget;
  opts.subfield_degree = subfield_degree;
  EvalStats stats;
  bool value = evaluate(phi, f, asg, opts, &stats);
  json inputs{{"field", f->to_string()},
              {"formula", pretty_print(phi)},
              {"assignment", assign},
              {"budget", budget}};
  json result{{"value", value}, {"visits", stats.visits}, {"estimate", stats.estimate}};
  emit(run_report("formula eval", inputs, result, timer.ms()));
  return 0;
}

int cmd_formula_print(const std::string& inline_text, const std::string& file) {
  FormulaPtr phi = parse_formula(read_formula_input(inline_text, file));
  std::cout << pretty_print(phi) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pfisterlab: quadratic form certificates, curve censuses and ring sentences"};
  app.require_subcommand(1);

  // isotropy
  std::string iso_field, iso_form;
  int iso_bound = 2;
  uint64_t iso_budget = kDefaultSearchBudget;
  auto* iso = app.add_subcommand("isotropy", "decide isotropy of a diagonal form");
  iso->add_option("--field", iso_field, "field descriptor, e.g. GF(3) or GF(3)(t)")->required();
  iso->add_option("--form", iso_form, "comma-separated diagonal coefficients")->required();
  iso->add_option("--bound", iso_bound, "degree bound for function-field searches");
  iso->add_option("--budget", iso_budget, "candidate budget for bounded searches");

  // independent
  std::string ind_field, ind_elements, ind_profile = "auto";
  int ind_maxdeg = 4, ind_ell = 3;
  auto* ind = app.add_subcommand("independent", "algebraic independence with certificates");
  ind->add_option("--field", ind_field, "rational function field, e.g. GF(5)(t1,t2)")->required();
  ind->add_option("--elements", ind_elements, "comma-separated rational functions")->required();
  ind->add_option("--profile", ind_profile, "finite | e0 | rationals | auto");
  ind->add_option("--max-degree", ind_maxdeg, "extension-degree cap for the center search");
  ind->add_option("--char2-ell", ind_ell, "generalized-form degree in characteristic 2");

  // census
  std::string cen_family = "all", cen_store = default_store_path(), cen_csv;
  int64_t cen_qmax = 101;
  int cen_jobs = 1;
  auto* cen = app.add_subcommand("census", "curve census and coverage threshold scan");
  cen->add_option("--family", cen_family, "all | quintic | septic | char2");
  cen->add_option("--qmax", cen_qmax, "prime-power ceiling");
  cen->add_option("--store", cen_store, "JSON-lines cache path (or PFISTERLAB_STORE)");
  cen->add_option("--jobs", cen_jobs, "worker threads");
  cen->add_option("--csv", cen_csv, "also export a CSV summary");

  // compact
  std::string cmp_store = default_store_path();
  auto* cmp = app.add_subcommand("compact", "rewrite the census store without duplicates");
  cmp->add_option("--store", cmp_store, "JSON-lines cache path");

  // formula
  auto* fml = app.add_subcommand("formula", "generate, evaluate and print sentences");
  fml->require_subcommand(1);
  std::string gen_which, gen_family = "quintic";
  int gen_m = 2, gen_e = 1, gen_n = 0, gen_fold = 3;
  bool gen_json = false;
  auto* gen = fml->add_subcommand("gen", "generate a formula");
  gen->add_option("which", gen_which, "sa | sa-prime | constants | coverage | trdeg")->required();
  gen->add_option("--family", gen_family, "curve family for the ratio-set formulas");
  gen->add_option("--m", gen_m, "small-roots bound for the extended ratio set");
  gen->add_option("--e", gen_e, "base-field invariant for trdeg");
  gen->add_option("--n", gen_n, "transcendence degree for trdeg");
  gen->add_option("--fold-ceiling", gen_fold, "largest allowed Pfister fold");
  gen->add_flag("--json", gen_json, "emit a JSON report instead of plain text");

  std::string ev_field, ev_formula, ev_file, ev_assign;
  double ev_budget = kDefaultFormulaBudget;
  int ev_subdeg = 1;
  auto* ev = fml->add_subcommand("eval", "evaluate over a finite field");
  ev->add_option("--field", ev_field, "finite field descriptor")->required();
  ev->add_option("--formula", ev_formula, "formula text (otherwise --file or stdin)");
  ev->add_option("--file", ev_file, "read the formula from a file");
  ev->add_option("--assign", ev_assign, "free-variable assignment, e.g. a=1,s=u+1");
  ev->add_option("--budget", ev_budget, "worst-case cost budget");
  ev->add_option("--subfield-degree", ev_subdeg, "InSub is membership in GF(p^d)");

  std::string pr_formula, pr_file;
  auto* pr = fml->add_subcommand("print", "parse and pretty-print");
  pr->add_option("--formula", pr_formula, "formula text (otherwise --file or stdin)");
  pr->add_option("--file", pr_file, "read the formula from a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (iso->parsed()) return cmd_isotropy(iso_field, iso_form, iso_bound, iso_budget);
    if (ind->parsed()) return cmd_independent(ind_field, ind_elements, ind_profile, ind_maxdeg, ind_ell);
    if (cen->parsed()) return cmd_census(cen_family, cen_qmax, cen_store, cen_jobs, cen_csv);
    if (cmp->parsed()) return cmd_compact(cmp_store);
    if (fml->parsed()) {
      if (gen->parsed())
        return cmd_formula_gen(gen_which, gen_family, gen_m, gen_e, gen_n, gen_fold, gen_json);
      if (ev->parsed())
        return cmd_formula_eval(ev_field, ev_formula, ev_file, ev_assign, ev_budget, ev_subdeg);
      if (pr->parsed()) return cmd_formula_print(pr_formula, pr_file);
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return map_error_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
