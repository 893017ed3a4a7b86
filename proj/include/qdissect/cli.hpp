#pragma once

#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eta_parser.hpp"
#include "registry.hpp"
#include "report_io.hpp"

namespace qdissect::cli
{

enum ExitCode : int { pass = 0, fail = 1, usage = 2 };

struct usage_error : error {
    using error::error;
};

struct RunConfig {
    std::optional<int> order;
    std::optional<long> modulus;
    OutputFormat format = OutputFormat::plain;
    unsigned jobs = 1;
    bool timing = true;
    std::vector<std::string> selection;
};

/// QDISSECT_DEFAULT_ORDER, if set.
inline std::optional<int> env_default_order()
{
    const char* v = std::getenv("QDISSECT_DEFAULT_ORDER");
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 1'000'000) {
        throw usage_error(std::string("QDISSECT_DEFAULT_ORDER must be a positive integer, got '") + v + "'");
    }
    return static_cast<int>(n);
}

inline ProgressionSpec parse_progression(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw usage_error("--progression expects m,r");
    }
    try {
        std::size_t a = 0, b = 0;
        const int m = std::stoi(text.substr(0, comma), &a);
        const int r = std::stoi(text.substr(comma + 1), &b);
        if (a != comma || b != text.size() - comma - 1) {
            throw usage_error("--progression expects m,r");
        }
        return ProgressionSpec(m, r);
    } catch (const std::logic_error&) {
        throw usage_error("--progression expects m,r");
    }
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    std::vector<IdentityReport> reports;
    if (cfg.modulus) {
        // A modulus override only makes sense for single congruence families.
        for (const auto& name : cfg.selection) {
            const RegistryEntry& e = find_entry(name);
            CongruenceFamily f = [&] {
                try {
                    return congruence_family(name);
                } catch (const unknown_name_error&) {
                    throw usage_error("--mod applies only to single congruence families, not '" + name + "'");
                }
            }();
            f.modulus = *cfg.modulus;
            const auto start = std::chrono::steady_clock::now();
            IdentityReport r = verify_congruence(f, effective_order(e, cfg.order));
            r.elapsed_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            reports.push_back(std::move(r));
        }
        std::sort(reports.begin(), reports.end(),
                  [](const IdentityReport& a, const IdentityReport& b) { return a.name < b.name; });
    } else {
        reports = run_registry(cfg.selection, cfg.order, cfg.jobs);
    }
    out << write_reports(reports, cfg.format, WriteOptions{cfg.timing});
    const bool all = std::all_of(reports.begin(), reports.end(), [](const IdentityReport& r) { return r.holds; });
    return all ? pass : fail;
}

inline int cmd_expand(const std::string& expr, int order, const std::optional<ProgressionSpec>& progression,
                      std::optional<long> modulus, OutputFormat format, std::ostream& out)
{
    const EtaQuotientSpec spec = parse_eta_expression(expr);
    if (modulus && *modulus < 2) {
        throw usage_error("--mod must be >= 2");
    }
    TruncatedSeries s = eta_quotient(spec, order);
    if (progression) {
        s = extract_progression(s, *progression);
    }
    std::vector<Coefficient> values(s.coeffs().begin(), s.coeffs().end());
    if (modulus) {
        const ModularSeries m = reduce_mod(s, Coefficient(*modulus));
        values.assign(m.residues().begin(), m.residues().end());
    }
    switch (format) {
    case OutputFormat::json: {
        nlohmann::ordered_json j;
        j["expression"] = spec.to_string();
        j["order"] = order;
        j["progression"] = progression ? nlohmann::ordered_json(progression->to_string()) : nlohmann::ordered_json(nullptr);
        j["modulus"] = modulus ? nlohmann::ordered_json(*modulus) : nlohmann::ordered_json(nullptr);
        auto& rows = j["coefficients"] = nlohmann::ordered_json::array();
        for (std::size_t n = 0; n < values.size(); ++n) {
            rows.push_back({{"n", n}, {"coefficient", values[n].get_str()}});
        }
        out << j.dump(2) << '\n';
        break;
    }
    case OutputFormat::csv:
        out << "n,coefficient\n";
        for (std::size_t n = 0; n < values.size(); ++n) {
            out << n << ',' << values[n] << '\n';
        }
        break;
    case OutputFormat::plain:
        out << "# " << spec.to_string();
        if (progression) {
            out << ", terms q^(" << progression->to_string() << ")";
        }
        if (modulus) {
            out << ", mod " << *modulus;
        }
        out << '\n';
        for (std::size_t n = 0; n < values.size(); ++n) {
            out << std::setw(6) << n << "  " << values[n] << '\n';
        }
        break;
    }
    return pass;
}

inline int cmd_list(OutputFormat format, std::ostream& out)
{
    const auto items = list_identities();
    switch (format) {
    case OutputFormat::json: {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& i : items) {
            arr.push_back({{"name", i.name}, {"anchor", i.anchor}, {"kind", to_string(i.kind)},
                           {"default_order", i.default_order}});
        }
        out << arr.dump(2) << '\n';
        break;
    }
    case OutputFormat::csv:
        out << "name,kind,default_order,anchor\n";
        for (const auto& i : items) {
            out << csv_field(i.name) << ',' << to_string(i.kind) << ',' << i.default_order << ',' << csv_field(i.anchor)
                << '\n';
        }
        break;
    case OutputFormat::plain:
        out << std::left << std::setw(24) << "name" << std::setw(12) << "kind" << std::right << std::setw(6) << "order"
            << "  anchor\n";
        for (const auto& i : items) {
            out << std::left << std::setw(24) << i.name << std::setw(12) << to_string(i.kind) << std::right
                << std::setw(6) << i.default_order << "  " << i.anchor << '\n';
        }
        break;
    }
    return pass;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact q-series dissection and congruence checker", "qdissect"};
    app.require_subcommand(1, 1);

    bool all = false;
    std::vector<std::string> names;
    std::optional<int> order;
    std::optional<long> modulus;
    std::string format = "plain";
    unsigned jobs = 1;
    bool no_timing = false;
    std::string expr;
    std::string progression;

    const std::vector<std::string> formats{"plain", "json", "csv"};

    auto* verify = app.add_subcommand("verify", "Run registry entries");
    auto* all_opt = verify->add_flag("--all", all, "Run every entry");
    verify->add_option("--name", names, "Entry name (repeatable)")->excludes(all_opt);
    verify->add_option("--order", order, "Truncation order")->check(CLI::Range(1, 1'000'000));
    verify->add_option("--mod", modulus, "Override the modulus of a congruence family")->check(CLI::Range(2L, 1'000'000'000L));
    verify->add_option("--format", format)->check(CLI::IsMember(formats));
    verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    verify->add_flag("--no-timing", no_timing, "Report elapsed_ms as 0 for byte-stable output");

    auto* expand = app.add_subcommand("expand", "Expand an eta-quotient expression");
    expand->add_option("expr", expr, "Expression, e.g. \"E2/E1^3\"")->required();
    expand->add_option("--order", order, "Number of source coefficients")->check(CLI::Range(1, 1'000'000));
    expand->add_option("--progression", progression, "Keep only exponents m n + r, given as m,r");
    expand->add_option("--mod", modulus, "Reduce coefficients into [0, M)");
    expand->add_option("--format", format)->check(CLI::IsMember(formats));

    auto* list = app.add_subcommand("list", "List registry entries");
    list->add_option("--format", format)->check(CLI::IsMember(formats));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return pass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }

    try {
        const OutputFormat fmt = parse_format(format);
        if (*verify) {
            RunConfig cfg;
            cfg.order = order ? order : env_default_order();
            cfg.modulus = modulus;
            cfg.format = fmt;
            cfg.jobs = jobs;
            cfg.timing = !no_timing;
            if (all) {
                cfg.selection = all_entry_names();
            } else if (!names.empty()) {
                cfg.selection = names;
            } else {
                throw usage_error("verify needs --all or at least one --name");
            }
            for (const auto& n : cfg.selection) {
                find_entry(n);
            }
            return cmd_verify(cfg, out);
        }
        if (*expand) {
            const std::optional<int> env = env_default_order();
            const int n = order ? *order : env ? *env : 20;
            std::optional<ProgressionSpec> p;
            if (!progression.empty()) {
                p = parse_progression(progression);
            }
            return cmd_expand(expr, n, p, modulus, fmt, out);
        }
        return cmd_list(fmt, out);
    } catch (const parse_error& e) {
        err << e.what() << '\n';
        return usage;
    } catch (const unknown_name_error& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
}

} // namespace qdissect::cli
