#include "pfl/report.hpp"

#include <fstream>

namespace pfl {

const char* toolkit_version() { return "0.1.0"; }

json run_report(const std::string& command, json inputs, json result, double elapsed_ms) {
  json rep;
  rep["schema_version"] = kReportSchemaVersion;
  rep["toolkit_version"] = toolkit_version();
  rep["command"] = command;
  rep["inputs"] = std::move(inputs);
  rep["result"] = std::move(result);
  rep["timing_ms"] = elapsed_ms;
  rep["seed"] = 0;  // no randomness affects verdicts
  return rep;
}

json value_to_json(const Value& v) { return v.to_string(); }

json form_to_json(const DiagonalForm& q) {
  json coeffs = json::array();
  for (const auto& c : q.coeffs) coeffs.push_back(c.to_string());
  return json{{"field", q.field->to_string()}, {"coefficients", coeffs}};
}

json certificate_to_json(const AnisotropyCertificate& cert, const CertificateCheck& check) {
  json j;
  j["field"] = cert.center.extended_ambient()->to_string();
  json center;
  center["residue_field"] = cert.center.residue_field()->to_string();
  json pt = json::array();
  for (const auto& b : cert.center.point()) pt.push_back(b.to_string());
  center["point"] = pt;
  j["center"] = center;
  j["residue_form"] = form_to_json(cert.residue_form);
  json params = json::array();
  for (const auto& g : cert.parameters) params.push_back(g.to_string());
  j["parameters"] = params;
  if (cert.jacobian_residues) {
    json rows = json::array();
    for (const auto& row : *cert.jacobian_residues) {
      json r = json::array();
      for (const auto& e : row) r.push_back(e.to_string());
      rows.push_back(r);
    }
    j["jacobian_residues"] = rows;
  }
  j["verdict"] = check.valid ? "Valid" : "Invalid";
  if (!check.failures.empty()) j["failures"] = check.failures;
  return j;
}

json independence_to_json(const IndependenceReport& rep) {
  json j;
  j["verdict"] = verdict_name(rep.verdict);
  json methods = json::array();
  for (auto m : rep.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["jacobian_rank"] = rep.jacobian.rank;
  if (rep.jacobian.minor_det) j["jacobian_minor"] = rep.jacobian.minor_det->to_string();
  if (rep.certificate && rep.certificate_check)
    j["certificate"] = certificate_to_json(*rep.certificate, *rep.certificate_check);
  if (rep.genform) {
    json g;
    g["ell"] = rep.genform->form.ell;
    json gens = json::array();
    for (const auto& s : rep.genform->form.generators) gens.push_back(s.to_string());
    g["generators"] = gens;
    g["verdict"] = rep.genform->check.valid ? "Valid" : "Invalid";
    json vals = json::array();
    for (const auto& lv : rep.genform->check.coefficient_values) vals.push_back(lv.to_string());
    g["coefficient_values"] = vals;
    j["genform_certificate"] = g;
  }
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

json bounded_search_to_json(const BoundedSearchOutcome& out) {
  json j;
  j["bound"] = out.bound;
  j["exhaustive"] = out.exhaustive;
  j["tried"] = out.tried;
  j["strategy"] = out.strategy;
  if (out.witness) {
    json w = json::array();
    for (const auto& x : *out.witness) w.push_back(x.to_string());
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json census_cell_to_json(const CensusCell& cell, std::optional<int64_t> m) {
  json j;
  j["family"] = cell.family;
  j["q"] = cell.q;
  j["a"] = cell.a_index;
  j["n_points"] = cell.n_points;
  j["s_a_size"] = cell.s_a_size;
  j["s_a_covers_field"] = cell.s_a_covers_field;
  if (m) j["s_a_prime_covers_field"] = cell.s_a_covers_field || cell.q <= *m;
  return j;
}

json scan_to_json(const ScanResult& scan) {
  json j;
  j["q_ceiling"] = scan.q_ceiling;
  j["m"] = scan.m;
  j["cells"] = scan.cells.size();
  j["cache_hits"] = scan.cache_hits;
  json fails = json::array();
  for (const auto& [q, a] : scan.failures) fails.push_back(json{{"q", q}, {"a", a}});
  j["failures"] = fails;
  return j;
}

CensusStore::CensusStore(std::string path) : path_(std::move(path)) { load(); }

void CensusStore::load() {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("family")) continue;
    CensusCell cell;
    cell.family = j["family"].get<std::string>();
    cell.q = j["q"].get<int64_t>();
    cell.a_index = j["a"].get<int64_t>();
    cell.n_points = j["n_points"].get<int64_t>();
    cell.s_a_size = j["s_a_size"].get<int64_t>();
    cell.s_a_covers_field = j["s_a_covers_field"].get<bool>();
    cells_[{cell.family, cell.q, cell.a_index}] = cell;
  }
}

const CensusCell* CensusStore::get(const std::string& family, int64_t q, int64_t a) const {
  auto it = cells_.find({family, q, a});
  return it == cells_.end() ? nullptr : &it->second;
}

void CensusStore::append(const CensusCell& cell) {
  cells_[{cell.family, cell.q, cell.a_index}] = cell;
  std::ofstream out(path_, std::ios::app);
  out << census_cell_to_json(cell).dump() << "\n";
}

void CensusStore::compact() {
  std::ofstream out(path_, std::ios::trunc);
  for (const auto& [key, cell] : cells_) out << census_cell_to_json(cell).dump() << "\n";
}

}  // namespace pfl
