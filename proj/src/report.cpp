#include "parafield/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace parafield {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::report_only: return "report-only";
    }
    return "unknown";
}

Json LemmaReport::to_json() const {
    Json j;
    j["check"] = check;
    Json inst = Json::object();
    for (const auto& [k, v] : instance) inst[k] = v;
    j["instance"] = inst;
    j["verdict"] = to_string(verdict);
    j["worst_ratio"] = worst_ratio;
    j["witness"] = witness.is_null() ? Json() : witness;
    return j;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw std::runtime_error("double formatting failed");
    return std::string(buf, res.ptr);
}

std::string format_int(uint64_t v) { return std::to_string(v); }
std::string format_int(int64_t v) { return std::to_string(v); }

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string to_csv(const std::vector<ReportRow>& rows) {
    std::string out = "command,p,m,n,exponent_p,exponent_q,strategy,seed,budget,metric_name,metric_value,verdict\n";
    for (const auto& r : rows) {
        const std::string* fields[] = {&r.command, &r.p,    &r.m,      &r.n,
                                       &r.exponent_p, &r.exponent_q, &r.strategy, &r.seed,
                                       &r.budget,     &r.metric_name, &r.metric_value, &r.verdict};
        for (size_t i = 0; i < 12; ++i) {
            if (i) out += ',';
            out += csv_escape(*fields[i]);
        }
        out += '\n';
    }
    return out;
}

Json rows_to_json(const std::string& command, const std::vector<ReportRow>& rows, const Json& witness) {
    Json j;
    j["command"] = command;
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json row;
        row["command"] = r.command;
        row["p"] = r.p;
        row["m"] = r.m;
        row["n"] = r.n;
        row["exponent_p"] = r.exponent_p;
        row["exponent_q"] = r.exponent_q;
        row["strategy"] = r.strategy;
        row["seed"] = r.seed;
        row["budget"] = r.budget;
        row["metric_name"] = r.metric_name;
        row["metric_value"] = r.metric_value;
        row["verdict"] = r.verdict;
        arr.push_back(row);
    }
    j["rows"] = arr;
    j["witness"] = witness.is_null() ? Json() : witness;
    return j;
}

std::string render_report(const std::string& format, const std::string& command,
                          const std::vector<ReportRow>& rows, const Json& witness) {
    if (format == "csv") return to_csv(rows);
    if (format == "json") return rows_to_json(command, rows, witness).dump(2) + "\n";
    throw std::invalid_argument("unknown report format: " + format);
}

}  // namespace parafield
