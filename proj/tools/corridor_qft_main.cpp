// corridor-qft: runs the equivalence, propagator, lifetime, and corridor
// experiment suites from a flat config file and writes tidy CSV/JSON tables.
//
// Exit codes: 0 all rows pass, 1 at least one row fails its tolerance,
// 2 configuration or runtime error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqft/cli/config.hpp"
#include "cqft/cli/rows.hpp"
#include "cqft/cli/runners.hpp"

namespace fs = std::filesystem;
using namespace cqft::cli;

namespace {

constexpr const char* kOutDirEnv = "CORRIDOR_QFT_OUTDIR";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string default_out_dir() {
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return ".";
}

struct RunOutcome {
    std::string name;
    std::size_t rowCount = 0;
    std::size_t failed = 0;
    std::string path;
};

RunOutcome run_one(const std::string& name, const std::vector<ResultRow>& rows,
                   OutputFormat format, const std::string& path) {
    emit(rows, format, path);
    RunOutcome outcome{name, rows.size(), 0, path};
    for (const ResultRow& row : rows)
        if (!row.passes()) ++outcome.failed;
    return outcome;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "corridor-qft: numerical checks relating a finite propagator regulator "
        "to a Gaussian measurement corridor"};
    app.footer("Config file: flat [section] key = value text; see configs/ for samples.\n"
               "Environment: " + std::string(kOutDirEnv) + " overrides the default output directory.");

    std::string experimentName;
    std::string configPath;
    std::string outPath;
    std::string formatName = "csv";
    std::optional<std::int64_t> seedOverride;

    app.add_option("experiment", experimentName,
                   "one of: equivalence, propagator, lifetime, corridor, all")
        ->required();
    app.add_option("--config", configPath, "path to the experiment config file")->required();
    app.add_option("--out", outPath,
                   "output file (single experiment) or directory (all); defaults to "
                   "<outdir>/<experiment>.<format>");
    app.add_option("--format", formatName, "csv or json")->default_val("csv");
    app.add_option("--seed", seedOverride, "override every seed key in the config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const ExperimentKind kind = parse_experiment_kind(experimentName);
        const OutputFormat format = parse_output_format(formatName);
        const std::string extension = format == OutputFormat::csv ? ".csv" : ".json";
        const ExperimentConfig config = parse_config(read_file(configPath), kind, seedOverride);

        std::vector<RunOutcome> outcomes;
        if (kind == ExperimentKind::all) {
            const fs::path dir = outPath.empty() ? fs::path(default_out_dir()) : fs::path(outPath);
            fs::create_directories(dir);
            outcomes.push_back(run_one("equivalence", run_equivalence(*config.equivalence), format,
                                       (dir / ("equivalence" + extension)).string()));
            outcomes.push_back(run_one("propagator", run_propagator(*config.propagator), format,
                                       (dir / ("propagator" + extension)).string()));
            outcomes.push_back(run_one("lifetime", run_lifetime(*config.lifetime), format,
                                       (dir / ("lifetime" + extension)).string()));
            outcomes.push_back(run_one("corridor", run_corridor(*config.corridor), format,
                                       (dir / ("corridor" + extension)).string()));
        } else {
            std::vector<ResultRow> rows;
            switch (kind) {
                case ExperimentKind::equivalence: rows = run_equivalence(*config.equivalence); break;
                case ExperimentKind::propagator: rows = run_propagator(*config.propagator); break;
                case ExperimentKind::lifetime: rows = run_lifetime(*config.lifetime); break;
                case ExperimentKind::corridor: rows = run_corridor(*config.corridor); break;
                case ExperimentKind::all: break;
            }
            const std::string path =
                outPath.empty()
                    ? (fs::path(default_out_dir()) / (experimentName + extension)).string()
                    : outPath;
            if (const fs::path parent = fs::path(path).parent_path(); !parent.empty())
                fs::create_directories(parent);
            outcomes.push_back(run_one(experimentName, rows, format, path));
        }

        bool anyFailed = false;
        for (const RunOutcome& o : outcomes) {
            std::cout << o.name << ": " << o.rowCount << " rows, " << o.failed << " failed -> "
                      << o.path << "\n";
            anyFailed = anyFailed || o.failed > 0;
        }
        return anyFailed ? 1 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
