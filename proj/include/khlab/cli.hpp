#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "khlab/braid.hpp"
#include "khlab/cube.hpp"
#include "khlab/errors.hpp"
#include "khlab/homology.hpp"
#include "khlab/invariants.hpp"
#include "khlab/verify.hpp"

namespace khlab::cli {

using nlohmann::json;

enum class InputKind { Braid, Pd };
enum class Ring { Integers, Rationals };
enum class Convention { Standard, Inverted };
enum class OutputFormat { Text, Json, Csv };
enum class Command { Homology, Jones, Verify, CubeStats };

struct RunConfig {
    Command command = Command::Homology;
    InputKind input_kind = InputKind::Braid;
    std::string input;  // braid text, or PD file path
    Ring ring = Ring::Integers;
    Convention convention = Convention::Standard;
    int crossing_cap = kDefaultCrossingCap;
    OutputFormat output_format = OutputFormat::Text;
};

enum ExitCode : int { kOk = 0, kInputError = 1, kResourceError = 2, kVerificationFailed = 3, kInternalError = 4 };

// ---------------------------------------------------------------- rendering

inline json bigint_to_json(const BigInt& v) {
    if (v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min())
        return json(static_cast<std::int64_t>(v));
    return json(v.str());
}

inline BigInt bigint_from_json(const json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    return BigInt(j.get<std::int64_t>());
}

inline json table_to_json(const BigradedGroup& t) {
    json rows = json::array();
    for (const auto& [k, e] : t.entries()) {
        json torsion = json::array();
        for (const auto& o : e.torsion) torsion.push_back(bigint_to_json(o));
        rows.push_back({{"i", k.first}, {"j", k.second}, {"rank", e.free_rank}, {"torsion", torsion}});
    }
    return rows;
}

inline BigradedGroup table_from_json(const json& rows) {
    BigradedGroup t;
    for (const auto& r : rows) {
        HomologyEntry e;
        e.free_rank = r.at("rank").get<std::size_t>();
        for (const auto& o : r.at("torsion")) e.torsion.push_back(bigint_from_json(o));
        t.set(r.at("i").get<int>(), r.at("j").get<int>(), std::move(e));
    }
    return t;
}

inline json polynomial_to_json(const LaurentPolynomial& p) {
    json out = json::object();
    for (const auto& [e, c] : p.terms()) out[std::to_string(e)] = c;
    return out;
}

inline LaurentPolynomial polynomial_from_json(const json& j) {
    LaurentPolynomial p;
    for (const auto& [k, v] : j.items()) p.add_term(std::stoi(k), v.get<std::int64_t>());
    return p;
}

/// "r" or "r+T<order>" per torsion summand, e.g. "1", "0+T2".
inline std::string table_cell(const HomologyEntry& e) {
    std::string s = std::to_string(e.free_rank);
    for (const auto& t : e.torsion) s += "+T" + t.str();
    return s;
}

/// Grid with rows = j descending, columns = i ascending.
inline std::string render_table_text(const BigradedGroup& t) {
    std::ostringstream out;
    if (t.empty()) {
        out << "j\\i\n";
        return out.str();
    }
    int i_lo = std::numeric_limits<int>::max(), i_hi = std::numeric_limits<int>::min();
    std::vector<int> js;
    for (const auto& [k, e] : t.entries()) {
        i_lo = std::min(i_lo, k.first);
        i_hi = std::max(i_hi, k.first);
        js.push_back(k.second);
    }
    std::sort(js.begin(), js.end(), std::greater<>());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    std::size_t width = 3;
    for (const auto& [k, e] : t.entries()) width = std::max(width, table_cell(e).size());
    for (int j : js) width = std::max(width, std::to_string(j).size());
    for (int i = i_lo; i <= i_hi; ++i) width = std::max(width, std::to_string(i).size());
    width += 1;
    out << std::left << std::setw(static_cast<int>(width)) << "j\\i";
    for (int i = i_lo; i <= i_hi; ++i) out << std::setw(static_cast<int>(width)) << i;
    out << '\n';
    for (int j : js) {
        out << std::setw(static_cast<int>(width)) << j;
        for (int i = i_lo; i <= i_hi; ++i) {
            const auto e = t.at(i, j);
            out << std::setw(static_cast<int>(width)) << (e.is_zero() ? std::string(".") : table_cell(e));
        }
        out << '\n';
    }
    std::string s = out.str();
    // drop trailing padding on each line
    std::string trimmed;
    std::istringstream lines(s);
    for (std::string line; std::getline(lines, line);) {
        line.erase(line.find_last_not_of(' ') + 1);
        trimmed += line + '\n';
    }
    return trimmed;
}

/// Columns i, j, rank, torsion (orders joined by ';').
inline std::string render_table_csv(const BigradedGroup& t) {
    std::ostringstream out;
    out << "i,j,rank,torsion\n";
    for (const auto& [k, e] : t.entries()) {
        out << k.first << ',' << k.second << ',' << e.free_rank << ',';
        for (std::size_t n = 0; n < e.torsion.size(); ++n) out << (n ? ";" : "") << e.torsion[n];
        out << '\n';
    }
    return out.str();
}

inline std::string render_table(const BigradedGroup& t, OutputFormat fmt) {
    switch (fmt) {
        case OutputFormat::Text: return render_table_text(t);
        case OutputFormat::Csv: return render_table_csv(t);
        case OutputFormat::Json: return table_to_json(t).dump(2) + "\n";
    }
    return {};
}

inline json report_to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"details", c.details}});
    return {{"input", r.input.to_string()},
            {"strands", r.input.strands()},
            {"crossings", r.crossings},
            {"is_knot", r.is_knot},
            {"checks", checks}};
}

// ------------------------------------------------------------------ running

struct LoadedInput {
    Diagram diagram;
    std::optional<BraidWord> braid;
    json echo;
    int components = 0;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read PD file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline LoadedInput load_input(const RunConfig& cfg) {
    LoadedInput in;
    if (cfg.input_kind == InputKind::Braid) {
        in.braid = parse_braid(cfg.input);
        in.diagram = braid_closure(*in.braid);
        in.components = braid_permutation(*in.braid).component_count();
        in.echo = {{"kind", "braid"}, {"text", cfg.input}, {"strands", in.braid->strands()}};
    } else {
        in.diagram = from_pd(read_file(cfg.input));
        in.components = in.diagram.component_count();
        in.echo = {{"kind", "pd"}, {"text", cfg.input}, {"strands", nullptr}};
    }
    return in;
}

inline const char* convention_name(Convention c) { return c == Convention::Standard ? "standard" : "inverted"; }

inline std::string metadata_text(const LoadedInput& in, const RunConfig& cfg) {
    std::ostringstream out;
    out << "input: " << in.echo["kind"].get<std::string>() << " " << cfg.input << '\n';
    if (in.braid) out << "strands: " << in.braid->strands() << '\n';
    out << "crossings: " << in.diagram.crossing_count() << " (n+ = " << in.diagram.n_plus()
        << ", n- = " << in.diagram.n_minus() << "), components: " << in.components << '\n';
    out << "convention: " << convention_name(cfg.convention)
        << ", ring: " << (cfg.ring == Ring::Integers ? "Z" : "Q") << '\n';
    return out.str();
}

inline json metadata_json(const LoadedInput& in, const RunConfig& cfg) {
    return {{"input", in.echo},
            {"n_plus", in.diagram.n_plus()},
            {"n_minus", in.diagram.n_minus()},
            {"components", in.components},
            {"convention", convention_name(cfg.convention)}};
}

inline int run_homology(const RunConfig& cfg, const LoadedInput& in, std::ostream& out, double& elapsed_ms) {
    const auto start = std::chrono::steady_clock::now();
    auto table = homology_table(in.diagram, {cfg.crossing_cap}).normalized;
    if (cfg.ring == Ring::Rationals) table = table.rational();
    auto chi = homology_euler_characteristic(table);
    if (cfg.convention == Convention::Inverted) {
        table = convention_toggle(table);
        chi = chi.mirrored();
    }
    elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    switch (cfg.output_format) {
        case OutputFormat::Json: {
            json doc = metadata_json(in, cfg);
            doc["ring"] = cfg.ring == Ring::Integers ? "z" : "q";
            doc["homology"] = table_to_json(table);
            doc["euler_characteristic"] = polynomial_to_json(chi);
            doc["timing"] = {{"wall_ms", elapsed_ms}};
            out << doc.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv: out << render_table_csv(table); break;
        case OutputFormat::Text:
            out << metadata_text(in, cfg) << render_table_text(table)
                << "euler characteristic: " << chi.to_string() << '\n'
                << "time: " << std::fixed << std::setprecision(1) << elapsed_ms << " ms\n";
            break;
    }
    return kOk;
}

inline int run_jones(const RunConfig& cfg, const LoadedInput& in, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    auto jones = jones_state_sum(in.diagram, cfg.crossing_cap);
    if (cfg.convention == Convention::Inverted) jones = jones.mirrored();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    switch (cfg.output_format) {
        case OutputFormat::Json: {
            json doc = metadata_json(in, cfg);
            doc["jones"] = polynomial_to_json(jones);
            doc["timing"] = {{"wall_ms", ms}};
            out << doc.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv:
            out << "exponent,coefficient\n";
            for (const auto& [e, c] : jones.terms()) out << e << ',' << c << '\n';
            break;
        case OutputFormat::Text: out << metadata_text(in, cfg) << "jones: " << jones.to_string() << '\n'; break;
    }
    return kOk;
}

inline int run_verify(const RunConfig& cfg, const LoadedInput& in, std::ostream& out) {
    if (!in.braid) throw InputError("verify needs a braid word (--braid)");
    const auto report = verify_positive_braid(*in.braid, {cfg.crossing_cap});
    switch (cfg.output_format) {
        case OutputFormat::Json: out << report_to_json(report).dump(2) << '\n'; break;
        case OutputFormat::Csv:
            out << "name,status,details\n";
            for (const auto& c : report.checks) {
                std::string d = c.details;
                std::replace(d.begin(), d.end(), '"', '\'');
                out << c.name << ',' << to_string(c.status) << ",\"" << d << "\"\n";
            }
            break;
        case OutputFormat::Text:
            out << "input: " << report.input.to_string() << " (" << report.crossings << " crossings, "
                << (report.is_knot ? "knot" : std::to_string(report.components) + "-component link") << ")\n";
            for (const auto& c : report.checks) out << '[' << to_string(c.status) << "] " << c.name << ": " << c.details << '\n';
            out << (report.passed() ? "all checks passed" : "VERIFICATION FAILED") << '\n';
            break;
    }
    return report.passed() ? kOk : kVerificationFailed;
}

inline int run_cube_stats(const RunConfig& cfg, const LoadedInput& in, std::ostream& out) {
    check_crossing_cap(in.diagram, cfg.crossing_cap);
    const auto& d = in.diagram;
    const int m = d.crossing_count();
    const int flip = cfg.convention == Convention::Inverted ? -1 : 1;
    json columns = json::array();
    CubeColumn current = build_column(d, 0);
    for (int i = 0; i <= m; ++i) {
        CubeColumn next;
        std::size_t nnz = 0;
        if (i < m) {
            next = build_column(d, i + 1);
            nnz = build_differential(d, current, next).nonzeros();
        }
        json qdims = json::object();
        for (const auto& [q, dim] : current.q_dimensions()) qdims[std::to_string(flip * q)] = dim;
        columns.push_back({{"degree", i - d.n_minus()},
                           {"resolutions", current.resolutions.size()},
                           {"dimension", current.dimension()},
                           {"q_dimensions", qdims},
                           {"differential_nonzeros", nnz}});
        current = std::move(next);
    }
    switch (cfg.output_format) {
        case OutputFormat::Json: {
            json doc = metadata_json(in, cfg);
            doc["columns"] = columns;
            out << doc.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv:
            out << "degree,resolutions,dimension,differential_nonzeros\n";
            for (const auto& c : columns)
                out << c["degree"] << ',' << c["resolutions"] << ',' << c["dimension"] << ','
                    << c["differential_nonzeros"] << '\n';
            break;
        case OutputFormat::Text:
            out << metadata_text(in, cfg);
            for (const auto& c : columns) {
                out << "C^" << c["degree"] << ": " << c["resolutions"] << " resolutions, dim "
                    << c["dimension"] << ", d nnz " << c["differential_nonzeros"] << ", q-dims";
                for (const auto& [q, dim] : c["q_dimensions"].items()) out << ' ' << q << ':' << dim;
                out << '\n';
            }
            break;
    }
    return kOk;
}

inline int execute(const RunConfig& cfg, std::ostream& out) {
    const auto in = load_input(cfg);
    double ms = 0;
    switch (cfg.command) {
        case Command::Homology: return run_homology(cfg, in, out, ms);
        case Command::Jones: return run_jones(cfg, in, out);
        case Command::Verify: return run_verify(cfg, in, out);
        case Command::CubeStats: return run_cube_stats(cfg, in, out);
    }
    return kInternalError;
}

/// Parses argv (without the program name) and runs one command. Errors go
/// to `err`; the return value is the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Khovanov homology of braid closures and signed PD diagrams"};
    RunConfig cfg;
    std::string command, braid, pd, ring = "z", convention = "standard", format = "text";
    std::optional<int> cap;
    app.add_option("command", command, "homology | jones | verify | cube-stats")
        ->required()
        ->check(CLI::IsMember({"homology", "jones", "verify", "cube-stats"}));
    auto* braid_opt = app.add_option("--braid", braid, "braid word, e.g. \"p=3; 1 -2 1\"");
    auto* pd_opt = app.add_option("--pd", pd, "file with signed PD records");
    braid_opt->excludes(pd_opt);
    app.add_option("--ring", ring, "z | q")->check(CLI::IsMember({"z", "q"}));
    app.add_option("--convention", convention, "standard | inverted")
        ->check(CLI::IsMember({"standard", "inverted"}));
    app.add_option("--cap", cap, "maximum crossing count");
    app.add_option("--format", format, "text | json | csv")->check(CLI::IsMember({"text", "json", "csv"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (braid_opt->count() == 0 && pd_opt->count() == 0) throw InputError("one of --braid or --pd is required");
        cfg.command = command == "homology" ? Command::Homology
                    : command == "jones"    ? Command::Jones
                    : command == "verify"   ? Command::Verify
                                            : Command::CubeStats;
        cfg.input_kind = braid_opt->count() ? InputKind::Braid : InputKind::Pd;
        cfg.input = braid_opt->count() ? braid : pd;
        cfg.ring = ring == "z" ? Ring::Integers : Ring::Rationals;
        cfg.convention = convention == "standard" ? Convention::Standard : Convention::Inverted;
        cfg.output_format = format == "json" ? OutputFormat::Json : format == "csv" ? OutputFormat::Csv : OutputFormat::Text;
        if (const char* env = std::getenv("KHLAB_CAP"); env && *env)
            cfg.crossing_cap = detail::parse_int(env, "KHLAB_CAP value");
        if (cap) cfg.crossing_cap = *cap;
        if (cfg.crossing_cap < 1) throw InputError("crossing cap must be at least 1");
        return execute(cfg, out);
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResourceError;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace khlab::cli
