#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cvbell/scan.hpp"

namespace cvbell::cli {

enum class Command { scan, converge, slit, werner, xblock, equiv };
enum class Format { csv, json };

/// Invalid command line or config file; field() names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Thrown by parse_config for --help; what() is the usage text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::scan;
    std::optional<int> M;
    int grid_points = 101;
    std::optional<double> delta_theta;
    std::optional<double> eta;
    std::vector<int> M_list;
    std::string output_path;  // empty: dataset goes to stdout
    Format format = Format::csv;
    scan::FourPhases phases{0.3, 0.9, 0.1, 1.2};
};

/// Parses `<command> [--flag value]...` (program name excluded). A
/// `--config PATH` flag, or the explicit config_file argument, loads a flat
/// `key = value` file first; flags then override file values. Keys are the
/// long flag names without dashes. Validation runs per command.
RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& config_file = {});

/// Reads a flat key-value config file into (key, value) pairs. '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

using Cell = std::variant<long long, double, std::string>;

/// A fixed-column table plus a one-line human summary.
struct Dataset {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::string summary;
};

/// Computes the dataset for a validated config.
Dataset execute(const RunConfig& config, unsigned threads = scan::default_thread_count());

/// 17 significant digits, round-trip exact for doubles.
std::string format_real(double value);

void write_csv(std::ostream& out, const Dataset& data);

/// {"command": str, "columns": [str...], "rows": [[cell...]...], "summary": str}
void write_json(std::ostream& out, const Dataset& data);

/// Full pipeline: parse, execute, write. Returns the process exit status:
/// 0 success, 2 invalid configuration, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvbell::cli
