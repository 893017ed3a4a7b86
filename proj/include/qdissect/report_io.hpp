#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "registry.hpp"

namespace qdissect
{

enum class OutputFormat { plain, json, csv };

inline OutputFormat parse_format(const std::string& s)
{
    if (s == "plain") return OutputFormat::plain;
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    throw unknown_name_error("unknown format '" + s + "'");
}

struct WriteOptions {
    // Drop elapsed_ms so that repeated runs are byte-identical.
    bool timing = true;
};

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const IdentityReport& r, const WriteOptions& opt = {})
{
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["order"] = r.order;
    j["modulus"] = r.modulus ? nlohmann::ordered_json(*r.modulus) : nlohmann::ordered_json(nullptr);
    j["holds"] = r.holds;
    if (r.first_discrepancy) {
        j["first_discrepancy"] = {{"exponent", r.first_discrepancy->exponent},
                                  {"lhs", r.first_discrepancy->lhs},
                                  {"rhs", r.first_discrepancy->rhs}};
    } else {
        j["first_discrepancy"] = nullptr;
    }
    j["instances_checked"] = r.instances_checked;
    j["elapsed_ms"] = opt.timing ? r.elapsed_ms : 0.0;
    j["anchor"] = r.anchor;
    j["notes"] = r.notes;
    return j;
}

inline IdentityReport report_from_json(const nlohmann::json& j)
{
    IdentityReport r;
    r.name = j.at("name").get<std::string>();
    r.order = j.at("order").get<int>();
    if (!j.at("modulus").is_null()) {
        r.modulus = j.at("modulus").get<long>();
    }
    r.holds = j.at("holds").get<bool>();
    const auto& d = j.at("first_discrepancy");
    if (!d.is_null()) {
        r.first_discrepancy = Discrepancy{d.at("exponent").get<long>(), d.at("lhs").get<std::string>(),
                                          d.at("rhs").get<std::string>()};
    }
    r.instances_checked = j.at("instances_checked").get<long>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    r.anchor = j.at("anchor").get<std::string>();
    r.notes = j.value("notes", std::string());
    return r;
}

inline std::string reports_to_json(const std::vector<IdentityReport>& reports, const WriteOptions& opt = {})
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        arr.push_back(to_json(r, opt));
    }
    return arr.dump(2) + "\n";
}

inline std::vector<IdentityReport> reports_from_json(const std::string& text)
{
    std::vector<IdentityReport> out;
    for (const auto& j : nlohmann::json::parse(text)) {
        out.push_back(report_from_json(j));
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

inline std::string format_ms(double ms)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << ms;
    return os.str();
}

inline std::string reports_to_csv(const std::vector<IdentityReport>& reports, const WriteOptions& opt = {})
{
    std::ostringstream os;
    os << "name,order,modulus,holds,discrepancy_exponent,discrepancy_lhs,discrepancy_rhs,instances_checked,elapsed_ms,"
          "anchor,notes\n";
    for (const auto& r : reports) {
        os << csv_field(r.name) << ',' << r.order << ',' << (r.modulus ? std::to_string(*r.modulus) : "") << ','
           << (r.holds ? "true" : "false") << ',';
        if (r.first_discrepancy) {
            os << r.first_discrepancy->exponent << ',' << csv_field(r.first_discrepancy->lhs) << ','
               << csv_field(r.first_discrepancy->rhs);
        } else {
            os << ",,";
        }
        os << ',' << r.instances_checked << ',' << format_ms(opt.timing ? r.elapsed_ms : 0.0) << ','
           << csv_field(r.anchor) << ',' << csv_field(r.notes) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Plain table

inline std::string reports_to_plain(const std::vector<IdentityReport>& reports, const WriteOptions& opt = {})
{
    std::ostringstream os;
    os << std::left << std::setw(24) << "name" << std::right << std::setw(7) << "order" << std::setw(5) << "mod"
       << std::setw(7) << "status" << std::setw(11) << "instances";
    if (opt.timing) {
        os << std::setw(12) << "ms";
    }
    os << "  first discrepancy\n";
    for (const auto& r : reports) {
        os << std::left << std::setw(24) << r.name << std::right << std::setw(7) << r.order << std::setw(5)
           << (r.modulus ? std::to_string(*r.modulus) : "-") << std::setw(7) << (r.holds ? "PASS" : "FAIL")
           << std::setw(11) << r.instances_checked;
        if (opt.timing) {
            os << std::setw(12) << format_ms(r.elapsed_ms);
        }
        os << "  ";
        if (r.first_discrepancy) {
            os << "q^" << r.first_discrepancy->exponent << ": " << r.first_discrepancy->lhs << " vs "
               << r.first_discrepancy->rhs;
        } else {
            os << "-";
        }
        os << '\n';
    }
    return os.str();
}

inline std::string write_reports(const std::vector<IdentityReport>& reports, OutputFormat f, const WriteOptions& opt = {})
{
    switch (f) {
    case OutputFormat::json: return reports_to_json(reports, opt);
    case OutputFormat::csv: return reports_to_csv(reports, opt);
    case OutputFormat::plain: return reports_to_plain(reports, opt);
    }
    return {};
}

} // namespace qdissect
