#pragma once

// Command-line front end. Kept in a header so tests can drive run() in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hvalence/planar_finder.hpp"
#include "hvalence/ray_analysis.hpp"
#include "hvalence/valence_formula.hpp"
#include "hvalence/plot_data.hpp"

namespace hvalence::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2, kStructural = 3 };

inline constexpr const char* kSchemaVersion = "1";

/// A cell of an output row: integer, real, boolean or text.
using Cell = std::variant<long long, double, bool, std::string>;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const {
            if (v.find_first_of(",\"\n") == std::string::npos) return v;
            std::string quoted = "\"";
            for (char ch : v) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return quoted + "\"";
        }
    };
    return std::visit(Visitor{}, c);
}

inline nlohmann::json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return nlohmann::json(v); }, c);
}

/// One command's output: fixed columns plus rows, rendered as CSV or as the
/// JSON record {schema_version, command, parameters, payload}.
struct OutputRecord {
    std::string command;
    std::map<std::string, Cell> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::string csv() const {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
            out += '\n';
        }
        return out;
    }

    std::string json() const {
        nlohmann::json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = command;
        j["parameters"] = nlohmann::json::object();
        for (const auto& [k, v] : parameters) j["parameters"][k] = cell_json(v);
        j["payload"] = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json obj = nlohmann::json::object();
            for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i]] = cell_json(row[i]);
            j["payload"].push_back(std::move(obj));
        }
        return j.dump(2) + "\n";
    }

    std::string render(const std::string& format) const { return format == "json" ? json() : csv(); }
};

namespace detail {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require_n(int n) {
    if (n < 4) throw UsageError("n must be >= 4 (the construction needs n >= 4), got " + std::to_string(n));
}

inline void require_range(int from, int to) {
    require_n(from);
    if (to < from)
        throw UsageError("empty range: --n-from " + std::to_string(from) + " > --n-to " + std::to_string(to));
}

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open " + path + " for writing");
    file << text;
}

inline OutputRecord predict_record(int n) {
    const ValenceReport rep = predict_count(n);
    OutputRecord rec{"predict", {{"n", static_cast<long long>(n)}}, {"n", "kmax", "count", "baseline", "margin_tie"}, {}};
    rec.rows.push_back({static_cast<long long>(n), static_cast<long long>(rep.k_max), rep.predicted, rep.baseline,
                        rep.margin_tie});
    return rec;
}

inline OutputRecord table_record(int from, int to) {
    OutputRecord rec{"table",
                     {{"n_from", static_cast<long long>(from)}, {"n_to", static_cast<long long>(to)}},
                     {"n", "kmax", "count"},
                     {}};
    for (int n = from; n <= to; ++n) {
        const ValenceReport rep = predict_count(n);
        rec.rows.push_back({static_cast<long long>(n), static_cast<long long>(rep.k_max), rep.predicted});
    }
    return rec;
}

inline OutputRecord zeros_record(const std::vector<Zero>& zeros, int n, double perturb_arg) {
    OutputRecord rec{"zeros",
                     {{"n", static_cast<long long>(n)}, {"perturb_arg", perturb_arg}},
                     {"re", "im", "index", "multiplicity", "residual"},
                     {}};
    for (const auto& z : zeros)
        rec.rows.push_back({z.location.real(), z.location.imag(), static_cast<long long>(z.index),
                            static_cast<long long>(z.multiplicity), z.residual});
    return rec;
}

}  // namespace detail

/// Zeros of the (possibly rotated) construction: ray analysis for a = 1,
/// planar search otherwise.
inline std::vector<Zero> construction_zeros(int n, double perturb_arg) {
    if (perturb_arg == 0.0) return ray_zero_locations(n);
    const HarmonicMap f = build_perturbed({n, std::polar(1.0, perturb_arg)});
    return find_zeros(f, default_region(n));
}

inline OutputRecord asymptote_record(const std::vector<int>& ns) {
    const double slope = asymptotic_slope();
    OutputRecord rec{"asymptote", {{"X", solve_cos_fixed_point()}, {"slope", slope}},
                     {"n", "kmax", "kmax_over_n", "slope", "deviation"}, {}};
    for (int n : ns) {
        const int km = k_max(n).k_max;
        rec.rows.push_back({static_cast<long long>(n), static_cast<long long>(km), static_cast<double>(km) / n, slope,
                            km - slope * n});
    }
    return rec;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zero counts of the harmonic polynomials p + conj(q) built from S(z) = i z^n and "
                 "T(z) = i (z+1)^(n-1) (z-(n-1))"};
    app.name("hvalence");
    app.require_subcommand(1);

    int n = 0;
    int n_from = 0, n_to = 0;
    std::string format = "csv";
    std::string out_path;
    std::string out_dir = ".";
    double perturb_arg = 0.0;
    double window = 0.0;
    int resolution = 800;
    bool planar = false, force = false;
    std::vector<int> n_list{100, 500, 1000, 5000};

    auto* predict = app.add_subcommand("predict", "closed-form zero count for one n");
    predict->add_option("--n", n, "degree of p")->required();
    std::string predict_format = "text";
    predict->add_option("--format", predict_format)->check(CLI::IsMember({"text", "json"}));

    auto* table = app.add_subcommand("table", "zero counts for a range of n (CSV: n,kmax,count)");
    table->add_option("--n-from", n_from)->required();
    table->add_option("--n-to", n_to)->required();
    table->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* verify = app.add_subcommand("verify", "compare the formula with the ray (and optionally planar) counts");
    verify->add_option("--n-from", n_from)->required();
    verify->add_option("--n-to", n_to)->required();
    verify->add_flag("--planar", planar, "also run the planar Newton oracle");
    verify->add_flag("--force", force, "allow --planar beyond n = 24");
    verify->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* zeros = app.add_subcommand("zeros", "list every zero (re,im,index,multiplicity,residual)");
    zeros->add_option("--n", n)->required();
    zeros->add_option("--perturb-arg", perturb_arg, "t in a = e^{it}");
    zeros->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    zeros->add_option("--out", out_path, "output file (default stdout)");

    auto* plot = app.add_subcommand("plot-data", "write rays.csv and imT_contour.csv for plotting the zero sets");
    plot->add_option("--n", n)->required();
    plot->add_option("--perturb-arg", perturb_arg, "t in a = e^{it}");
    plot->add_option("--window", window, "half-width of the square window (default n+1)");
    plot->add_option("--resolution", resolution, "grid cells per side (default 800)");
    plot->add_option("--out-dir", out_dir, "directory for the two CSV files");

    auto* asymptote = app.add_subcommand("asymptote", "k_max(n) against the limiting slope 1/4 - X/(2 pi)");
    asymptote->add_option("--n-list", n_list)->expected(1, -1);
    asymptote->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (*predict) {
            detail::require_n(n);
            const auto rec = detail::predict_record(n);
            if (predict_format == "json") {
                out << rec.json();
            } else {
                const auto rep = predict_count(n);
                out << "n=" << n << " count=" << rep.predicted << " kmax=" << rep.k_max
                    << " baseline=" << rep.baseline << (rep.margin_tie ? " margin_tie=true" : "") << '\n';
            }
            return kOk;
        }

        if (*table) {
            detail::require_range(n_from, n_to);
            out << detail::table_record(n_from, n_to).render(format);
            return kOk;
        }

        if (*verify) {
            detail::require_range(n_from, n_to);
            if (planar && n_to > 24 && !force)
                throw detail::UsageError("--planar is limited to n <= 24; pass --force to override");
            OutputRecord rec{"verify",
                             {{"n_from", static_cast<long long>(n_from)},
                              {"n_to", static_cast<long long>(n_to)},
                              {"planar", planar}},
                             {"n", "predicted", "ray_total", "agree"},
                             {}};
            if (planar) rec.columns.push_back("planar_total");
            bool all_agree = true;
            for (int m = n_from; m <= n_to; ++m) {
                const long long predicted = predict_count(m).predicted;
                const long long ray_total = total_from_rays(m);
                bool agree = predicted == ray_total;
                std::vector<Cell> row{static_cast<long long>(m), predicted, ray_total, agree};
                if (planar) {
                    long long planar_total = -1;
                    try {
                        const auto rep = cross_validate(m);
                        planar_total = rep.verified.value_or(-1);
                        agree = agree && rep.agree;
                    } catch (const mismatch_error& e) {
                        err << e.what() << '\n';
                        agree = false;
                    } catch (const completeness_failure& e) {
                        err << e.what() << '\n';
                        agree = false;
                    }
                    row[3] = agree;
                    row.emplace_back(planar_total);
                }
                all_agree = all_agree && agree;
                rec.rows.push_back(std::move(row));
            }
            out << rec.render(format);
            return all_agree ? kOk : kMismatch;
        }

        if (*zeros) {
            detail::require_n(n);
            std::vector<Zero> zs;
            try {
                zs = construction_zeros(n, perturb_arg);
            } catch (const completeness_failure& e) {
                err << e.what() << '\n';
                return kMismatch;
            }
            detail::write_output(detail::zeros_record(zs, n, perturb_arg).render(format), out_path, out);
            return kOk;
        }

        if (*plot) {
            detail::require_n(n);
            if (resolution < 16) throw detail::UsageError("--resolution must be >= 16");
            if (window <= 0.0) window = n + 1.0;
            const SplitForm T_form{n, std::polar(1.0, perturb_arg)};
            const auto rays = ray_segments(n, window);
            const auto contour = marching_squares(
                [&](double x, double y) { return T_form.T(complex{x, y}).imag(); }, window, resolution);

            auto segments_csv = [](const std::vector<Segment>& segs) {
                OutputRecord rec{"plot-data", {}, {"x1", "y1", "x2", "y2"}, {}};
                for (const auto& s : segs) rec.rows.push_back({s.x1, s.y1, s.x2, s.y2});
                return rec.csv();
            };
            const std::filesystem::path dir(out_dir);
            std::filesystem::create_directories(dir);
            detail::write_output(segments_csv(rays), (dir / "rays.csv").string(), out);
            detail::write_output(segments_csv(contour), (dir / "imT_contour.csv").string(), out);
            out << "rays.csv " << rays.size() << " segments\n"
                << "imT_contour.csv " << contour.size() << " segments\n";
            return kOk;
        }

        if (*asymptote) {
            for (int m : n_list) detail::require_n(m);
            const auto rec = asymptote_record(n_list);
            if (format == "json") {
                out << rec.json();
            } else {
                char buf[64];
                std::snprintf(buf, sizeof buf, "# X=%.14f\n", solve_cos_fixed_point());
                out << buf;
                std::snprintf(buf, sizeof buf, "# slope=%.14f\n", asymptotic_slope());
                out << buf << rec.csv();
            }
            return kOk;
        }
    } catch (const detail::UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const precondition_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const structural_violation& e) {
        err << "error: " << e.what() << '\n';
        return kStructural;
    }
    return kUsage;
}

}  // namespace hvalence::cli
