#include "cvbell/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cvbell/continuum.hpp"
#include "cvbell/states.hpp"

namespace cvbell::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Dense bipartite operators stop at dim 4096, i.e. M = 31.
constexpr int kMaxDenseM = 31;
// Structured expectations (slit) only hold (2M+1)^2 vectors.
constexpr int kMaxStateM = 256;

const std::set<std::string> kKnownKeys{"M", "grid-points", "delta-theta", "eta", "M-list", "output", "format", "phases"};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

int to_int(const std::string& field, const std::string& text) {
    int value = 0;
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(field, "cannot parse integer '" + text + "'");
    return value;
}

double to_real(const std::string& field, const std::string& text) {
    const auto t = trim(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError(field, "cannot parse number '" + text + "'");
    }
    if (used != t.size() || !std::isfinite(value)) throw ConfigError(field, "cannot parse number '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

std::vector<int> to_int_list(const std::string& field, const std::string& text) {
    std::vector<int> out;
    for (const auto& p : split(text)) out.push_back(to_int(field, p));
    return out;
}

scan::FourPhases to_phases(const std::vector<double>& v) {
    if (v.size() != 4) throw ConfigError("phases", "expected 4 comma-separated angles (phi_a,phi_a',phi_b,phi_b')");
    return {v[0], v[1], v[2], v[3]};
}

Format to_format(const std::string& text) {
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw ConfigError("format", "expected csv or json, got '" + text + "'");
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "M") {
        cfg.M = to_int(key, value);
    } else if (key == "grid-points") {
        cfg.grid_points = to_int(key, value);
    } else if (key == "delta-theta") {
        cfg.delta_theta = to_real(key, value);
    } else if (key == "eta") {
        cfg.eta = to_real(key, value);
    } else if (key == "M-list") {
        cfg.M_list = to_int_list(key, value);
    } else if (key == "output") {
        cfg.output_path = trim(value);
    } else if (key == "format") {
        cfg.format = to_format(trim(value));
    } else if (key == "phases") {
        std::vector<double> v;
        for (const auto& p : split(value)) v.push_back(to_real(key, p));
        cfg.phases = to_phases(v);
    } else {
        throw ConfigError(key, "unknown key");
    }
}

void require_M_range(const std::string& field, int M, int max) {
    if (M < 1 || M > max)
        throw ConfigError(field, "M=" + std::to_string(M) + " outside [1, " + std::to_string(max) + "]");
}

void require_M_list(const RunConfig& cfg, int max) {
    if (cfg.M_list.empty()) throw ConfigError("M-list", "required for this command");
    for (std::size_t i = 0; i < cfg.M_list.size(); ++i) {
        require_M_range("M-list", cfg.M_list[i], max);
        if (i > 0 && cfg.M_list[i] <= cfg.M_list[i - 1])
            throw ConfigError("M-list", "values must be strictly ascending");
    }
}

void require_aperture(const RunConfig& cfg) {
    if (!cfg.delta_theta) throw ConfigError("delta-theta", "required for this command");
    if (!(*cfg.delta_theta > 0.0 && *cfg.delta_theta <= kPi))
        throw ConfigError("delta-theta", "aperture must lie in (0, pi]");
}

void validate(const RunConfig& cfg) {
    if (cfg.grid_points < 2) throw ConfigError("grid-points", "grid needs at least 2 points per axis");
    switch (cfg.command) {
        case Command::scan:
        case Command::equiv:
            if (!cfg.M) throw ConfigError("M", "required for this command");
            require_M_range("M", *cfg.M, kMaxDenseM);
            break;
        case Command::converge: require_M_list(cfg, kMaxDenseM); break;
        case Command::slit:
            require_aperture(cfg);
            require_M_list(cfg, kMaxStateM);
            break;
        case Command::werner:
            require_aperture(cfg);
            if (cfg.eta && !(*cfg.eta >= 0.0 && *cfg.eta <= 1.0))
                throw ConfigError("eta", "mixing must lie in [0, 1]");
            break;
        case Command::xblock: break;
    }
}

const char* module_of(Command c) {
    switch (c) {
        case Command::scan:
        case Command::converge:
        case Command::equiv: return "spectral_scan";
        case Command::slit: return "states";
        case Command::werner:
        case Command::xblock: return "continuum_analytic";
    }
    return "cli";
}

double degrees(double radians) { return radians * 180.0 / kPi; }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

Dataset run_scan(const RunConfig& cfg, unsigned threads) {
    const rotor::TruncationLevel M(*cfg.M);
    const auto map = scan::max_eigenvalue_surface(M, scan::PhaseGrid::uniform(cfg.grid_points), threads);
    Dataset d{"scan", {"xi_a", "xi_b", "b_max"}, {}, {}};
    const auto& xa = map.grid.xi_a();
    const auto& xb = map.grid.xi_b();
    for (std::size_t i = 0; i < xa.size(); ++i)
        for (std::size_t j = 0; j < xb.size(); ++j)
            d.rows.push_back({xa[i], xb[j], map.b_max(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    d.summary = fmt::format("scan M={} grid={}x{}: argmax xi_a={:.6f} ({:.4f} pi), xi_b={:.6f} ({:.4f} pi), b_max={:.10f}, "
                            "violation={}",
                            M.value(), xa.size(), xb.size(), map.argmax.xi_a, map.argmax.xi_a / kPi, map.argmax.xi_b,
                            map.argmax.xi_b / kPi, map.argmax.value, yes_no(map.argmax.value > 2.0));
    return d;
}

Dataset run_converge(const RunConfig& cfg) {
    std::vector<rotor::TruncationLevel> levels;
    for (int m : cfg.M_list) levels.emplace_back(m);
    const auto report = scan::convergence_study(levels);
    Dataset d{"converge", {"M", "b_max", "gap_to_2sqrt2"}, {}, {}};
    for (const auto& row : report.rows) d.rows.push_back({static_cast<long long>(row.M), row.b_max, row.gap_to_tsirelson});
    const auto& last = report.rows.back();
    d.summary = fmt::format("converge at (pi/2, pi/2): M={}..{}, strictly_increasing={}, b_max(M={})={:.10f}, gap={:.3e}",
                            report.rows.front().M, last.M, yes_no(report.strictly_increasing), last.M, last.b_max,
                            last.gap_to_tsirelson);
    return d;
}

Dataset run_slit(const RunConfig& cfg) {
    const double dt = *cfg.delta_theta;
    Dataset d{"slit", {"M", "value", "analytic", "abs_error", "tail_mass"}, {}, {}};
    for (int m : cfg.M_list) {
        const auto r = states::truncated_violation(rotor::TruncationLevel(m, kMaxStateM), dt);
        d.rows.push_back({static_cast<long long>(m), r.value, r.analytic, r.abs_error, r.tail_mass});
    }
    const double analytic = continuum::slit_expectation(dt);
    const double threshold = continuum::violation_aperture_threshold();
    d.summary = fmt::format("slit delta_theta={:.6f} rad ({:.2f} deg): analytic={:.10f}, violation={}, "
                            "aperture threshold={:.10f} rad ({:.2f} deg)",
                            dt, degrees(dt), analytic, yes_no(analytic > 2.0), threshold, degrees(threshold));
    return d;
}

Dataset run_werner(const RunConfig& cfg) {
    const double dt = *cfg.delta_theta;
    if (cfg.eta) {
        const auto slit = continuum::WavePacketProfile::slit(dt);
        const double value = continuum::werner_expectation(continuum::WernerMixing(*cfg.eta), slit, slit);
        Dataset d{"werner", {"eta", "expectation"}, {{*cfg.eta, value}}, {}};
        d.summary = fmt::format("werner delta_theta={:.6f} rad ({:.2f} deg), eta={:.6f}: expectation={:.10f}, violation={}",
                                dt, degrees(dt), *cfg.eta, value, yes_no(value > 2.0));
        return d;
    }
    const auto t = continuum::werner_threshold(dt);
    Dataset d{"werner", {"delta_theta", "eta_star"}, {{dt, t.eta_star}}, {}};
    d.summary = t.violates ? fmt::format("werner delta_theta={:.6g} rad ({:.2f} deg): threshold eta*={:.10f}, "
                                         "violation for eta < eta*",
                                         dt, degrees(dt), t.eta_star)
                           : fmt::format("werner delta_theta={:.6g} rad ({:.2f} deg): no eta violates", dt, degrees(dt));
    return d;
}

Dataset run_xblock() {
    const auto block = continuum::chsh_block(continuum::BlockAngle(0.0), continuum::BlockAngle(0.0));
    const auto& x = block.matrix.matrix();
    Dataset d{"xblock", {"section", "row", "col", "re", "im"}, {}, {}};
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j)
            d.rows.push_back({std::string("X"), static_cast<long long>(i), static_cast<long long>(j), x(i, j).real(),
                              x(i, j).imag()});
    const auto spectrum = linalg::hermitian_eigenvalues(block.matrix);
    for (Eigen::Index k = 0; k < 4; ++k)
        d.rows.push_back({std::string("eigenvalue"), static_cast<long long>(k), 0LL, spectrum(k), 0.0});
    for (const int sign : {+1, -1}) {
        const auto chi = continuum::chi_eigenvector(sign);
        for (Eigen::Index k = 0; k < 4; ++k)
            d.rows.push_back({std::string(sign > 0 ? "chi_plus" : "chi_minus"), static_cast<long long>(k), 0LL,
                              chi(k).real(), chi(k).imag()});
    }
    d.summary = fmt::format("xblock: eigenvalues {:.12f} {:.12f} {:.12f} {:.12f} (expected -2sqrt2, 0, 0, 2sqrt2)",
                            spectrum(0), spectrum(1), spectrum(2), spectrum(3));
    return d;
}

Dataset run_equiv(const RunConfig& cfg) {
    const auto report = scan::unitary_equivalence_check(rotor::TruncationLevel(*cfg.M), cfg.phases);
    Dataset d{"equiv", {"max_spectral_deviation"}, {{report.max_spectral_deviation}}, {}};
    d.summary = fmt::format("equiv M={} phases=({}, {}, {}, {}): max spectral deviation={:.3e}", *cfg.M, cfg.phases.phi_a,
                            cfg.phases.phi_a_prime, cfg.phases.phi_b, cfg.phases.phi_b_prime,
                            report.max_spectral_deviation);
    return d;
}

std::string cell_text(const Cell& c) {
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* r = std::get_if<double>(&c)) return format_real(*r);
    return std::get<std::string>(c);
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20)
                    out += fmt::format("\\u{:04x}", static_cast<unsigned>(ch));
                else
                    out += ch;
        }
    }
    return out + "\"";
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", "line " + std::to_string(lineno) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (!kKnownKeys.contains(key)) throw ConfigError(key, "unknown key in config file");
        entries.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return entries;
}

RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& config_file) {
    CLI::App app{"Bell-CHSH violation with continuous angular variables", "cvbell"};
    app.set_help_flag("-h,--help", "Print this help message and exit");

    std::string command;
    std::string config_path;
    int M = 0;
    int grid_points = 0;
    double delta_theta = 0.0;
    double eta = 0.0;
    std::vector<int> M_list;
    std::string output;
    std::string format;
    std::vector<double> phases;

    app.add_option("command", command, "scan | converge | slit | werner | xblock | equiv")
        ->required()
        ->check(CLI::IsMember({"scan", "converge", "slit", "werner", "xblock", "equiv"}));
    app.add_option("--config", config_path, "flat key = value file; flags override its values");
    auto* o_M = app.add_option("--M", M, "angular momentum cutoff, basis |m| <= M");
    auto* o_grid = app.add_option("--grid-points", grid_points, "points per phase axis on [0, pi] (default 101)");
    auto* o_dt = app.add_option("--delta-theta", delta_theta, "slit aperture in radians");
    auto* o_eta = app.add_option("--eta", eta, "Werner mixing coefficient in [0, 1]");
    auto* o_list = app.add_option("--M-list", M_list, "comma-separated ascending cutoffs")->delimiter(',');
    auto* o_out = app.add_option("--output", output, "output file (default: stdout)");
    auto* o_fmt = app.add_option("--format", format, "csv | json (default csv)");
    auto* o_ph = app.add_option("--phases", phases, "phi_a,phi_a',phi_b,phi_b' in radians for equiv")->delimiter(',');

    // CLI11 wants argv order reversed
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw ConfigError("arguments", e.what());
    }

    RunConfig cfg;
    const auto file = config_file ? *config_file : config_path;
    if (!file.empty())
        for (const auto& [key, value] : read_config_file(file)) apply(cfg, key, value);

    const std::vector<std::pair<std::string, Command>> commands{
        {"scan", Command::scan},     {"converge", Command::converge}, {"slit", Command::slit},
        {"werner", Command::werner}, {"xblock", Command::xblock},     {"equiv", Command::equiv}};
    for (const auto& [name, value] : commands)
        if (name == command) cfg.command = value;

    if (o_M->count() > 0) cfg.M = M;
    if (o_grid->count() > 0) cfg.grid_points = grid_points;
    if (o_dt->count() > 0) cfg.delta_theta = delta_theta;
    if (o_eta->count() > 0) cfg.eta = eta;
    if (o_list->count() > 0) cfg.M_list = M_list;
    if (o_out->count() > 0) cfg.output_path = output;
    if (o_fmt->count() > 0) cfg.format = to_format(format);
    if (o_ph->count() > 0) cfg.phases = to_phases(phases);

    validate(cfg);
    return cfg;
}

Dataset execute(const RunConfig& config, unsigned threads) {
    validate(config);
    switch (config.command) {
        case Command::scan: return run_scan(config, threads);
        case Command::converge: return run_converge(config);
        case Command::slit: return run_slit(config);
        case Command::werner: return run_werner(config);
        case Command::xblock: return run_xblock();
        case Command::equiv: return run_equiv(config);
    }
    throw ConfigError("command", "unknown command");
}

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void write_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t i = 0; i < data.columns.size(); ++i) out << (i ? "," : "") << data.columns[i];
    out << '\n';
    for (const auto& row : data.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Dataset& data) {
    out << "{\n  \"command\": " << json_string(data.command) << ",\n  \"columns\": [";
    for (std::size_t i = 0; i < data.columns.size(); ++i) out << (i ? ", " : "") << json_string(data.columns[i]);
    out << "],\n  \"rows\": [";
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        out << (r ? ",\n    [" : "\n    [");
        const auto& row = data.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? ", " : "");
            if (const auto* s = std::get_if<std::string>(&row[i]))
                out << json_string(*s);
            else
                out << cell_text(row[i]);
        }
        out << "]";
    }
    out << (data.rows.empty() ? "],\n" : "\n  ],\n");
    out << "  \"summary\": " << json_string(data.summary) << "\n}\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_config(args);
    } catch (const HelpRequested& help) {
        out << help.what();
        return 0;
    } catch (const ConfigError& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return 2;
    }

    Dataset data;
    try {
        data = execute(cfg);
    } catch (const ConfigError& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: numerical failure in " << module_of(cfg.command) << ": " << e.what() << '\n';
        return 3;
    }

    const auto emit = [&](std::ostream& sink) {
        if (cfg.format == Format::json)
            write_json(sink, data);
        else
            write_csv(sink, data);
    };
    if (cfg.output_path.empty()) {
        emit(out);
        err << data.summary << '\n';
        return 0;
    }
    std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: invalid configuration: output: cannot open '" << cfg.output_path << "'\n";
        return 2;
    }
    emit(file);
    file.close();
    if (!file) {
        err << "error: failed writing '" << cfg.output_path << "'\n";
        return 3;
    }
    out << data.summary << '\n';
    return 0;
}

}  // namespace cvbell::cli
