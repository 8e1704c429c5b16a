#pragma once

// Shared JSON report schema and the append-only census store.

#include <map>
#include <optional>
#include <string>
#include <tuple>

#include <json.hpp>

#include "pfl/curves.hpp"
#include "pfl/independence.hpp"
#include "pfl/qforms.hpp"

namespace pfl {

using nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;
const char* toolkit_version();

// Envelope every command emits: re-running with identical inputs yields an
// identical report modulo timing.
json run_report(const std::string& command, json inputs, json result, double elapsed_ms);

json value_to_json(const Value& v);
json form_to_json(const DiagonalForm& q);
json certificate_to_json(const AnisotropyCertificate& cert, const CertificateCheck& check);
json independence_to_json(const IndependenceReport& rep);
json bounded_search_to_json(const BoundedSearchOutcome& out);
json census_cell_to_json(const CensusCell& cell, std::optional<int64_t> m = std::nullopt);
json scan_to_json(const ScanResult& scan);

// JSON-lines census store, one cell per line, append-only; compaction
// rewrites the file with duplicates dropped (last record wins).
class CensusStore {
 public:
  explicit CensusStore(std::string path);

  const std::string& path() const { return path_; }
  size_t size() const { return cells_.size(); }
  const CensusCell* get(const std::string& family, int64_t q, int64_t a) const;
  void append(const CensusCell& cell);
  void compact();

 private:
  void load();
  std::string path_;
  std::map<std::tuple<std::string, int64_t, int64_t>, CensusCell> cells_;
};

}  // namespace pfl
