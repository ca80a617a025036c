#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ruelle/harness.hpp"
#include "ruelle/relation.hpp"
#include "ruelle/series.hpp"
#include "ruelle/summability.hpp"

namespace ruelle {

using Json = nlohmann::json;

// Complex numbers are [re, im] pairs everywhere. Readers throw ConfigError on
// malformed input.
Json to_json(cplx z);
cplx complex_from_json(const Json& j);

Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

// {"p1": [...], "p2": [...], "p3": [...]} plus an optional
// "normalization": {"scale": [..], "shift": [..]}
Json to_json(const EntireMap& f);
EntireMap map_from_json(const Json& j);

// [{"a": [re, im], "w": [re, im]}, ...]
Json to_json(const GammaCombination& g);
GammaCombination combination_from_json(const Json& j);

// Full record, enough to rebuild the CriticalData bit for bit.
Json to_json(const CriticalData& cd);
CriticalData critical_data_from_json(const Json& j);

Json to_json(const SeriesEval& s);
Json to_json(const SummabilityReport& r);
Json to_json(const RelationReport& r, const VerdictRecord& v);
Json to_json(const CheckResult& c);
Json to_json(const std::vector<CheckResult>& checks);
Json to_json(const DefectResult& d);
Json to_json(const TransportResult& t);
Json to_json(const RankDiagnostics& r);
Json to_json(const PointLimit& l);

// CSV rows (header line without trailing newline, then one row per record)
std::string summability_csv_header();
std::string summability_csv_row(const SummabilityReport& r);
std::string relation_csv_header(std::size_t q);
std::string relation_csv_row(const RelationReport& r, const VerdictRecord& v);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ruelle
