#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

namespace parafield {

using Json = nlohmann::ordered_json;

enum class Verdict { pass, fail, report_only };

std::string to_string(Verdict v);

// Outcome of one inequality or identity check. `instance` holds ordered
// human-readable descriptors (field, trial counts, worst pair encodings);
// `witness` is non-null exactly when there is something to replay.
struct LemmaReport {
    std::string check;
    std::vector<std::pair<std::string, std::string>> instance;
    Verdict verdict = Verdict::pass;
    double worst_ratio = 0.0;
    Json witness;

    bool failed() const { return verdict == Verdict::fail; }
    Json to_json() const;
};

// One flat output row. The CSV schema is fixed:
//   command,p,m,n,exponent_p,exponent_q,strategy,seed,budget,metric_name,metric_value,verdict
struct ReportRow {
    std::string command;
    std::string p, m, n;
    std::string exponent_p, exponent_q;
    std::string strategy;
    std::string seed, budget;
    std::string metric_name, metric_value;
    std::string verdict;
};

// Shortest round-trip formatting via std::to_chars; locale independent and
// byte-stable, which the determinism contract relies on.
std::string format_double(double v);
std::string format_int(uint64_t v);
std::string format_int(int64_t v);

std::string to_csv(const std::vector<ReportRow>& rows);
Json rows_to_json(const std::string& command, const std::vector<ReportRow>& rows, const Json& witness);

// Serialized report in the requested format ("csv" or "json").
std::string render_report(const std::string& format, const std::string& command,
                          const std::vector<ReportRow>& rows, const Json& witness);

}  // namespace parafield
