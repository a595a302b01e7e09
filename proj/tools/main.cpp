// hybridcast command line: `run` executes a configured experiment,
// `describe` prints summary statistics of a price file's log returns.

#include "hybridcast/error.hpp"
#include "hybridcast/experiment/config.hpp"
#include "hybridcast/experiment/report.hpp"
#include "hybridcast/experiment/runner.hpp"
#include "hybridcast/timeseries.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

namespace hx = hybridcast::experiment;

int cmd_run(const std::string& config_path, const std::optional<std::string>& out,
            const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& jobs, bool audit, bool quiet) {
    auto cfg = hx::load_config(config_path);
    if (out) {
        cfg.output = *out;
    }
    if (seed) {
        cfg.seed = *seed;
    }
    if (jobs) {
        cfg.jobs = *jobs;
    }
    cfg.audit = cfg.audit || audit;
    const auto result = hx::run_experiment(cfg, quiet ? nullptr : &std::cerr);
    const auto files = hx::emit_reports(result, cfg, cfg.output);
    if (!quiet) {
        std::cerr << "wrote " << files.size() << " files to " << cfg.output.string() << " in " << result.seconds
                  << " s\n";
    }
    if (const auto n = result.failures(); n > 0) {
        std::cerr << n << " method(s) failed; see manifest.json\n";
        return 2;
    }
    return 0;
}

int cmd_describe(const std::string& data, const hybridcast::CsvSpec& csv, const std::optional<std::string>& from,
                 const std::optional<std::string>& to) {
    const auto prices = hybridcast::ingest_csv(data, csv);
    auto r = hybridcast::log_returns(prices);
    const std::size_t b = from ? r.lower_bound(hybridcast::parse_date(*from)) : 0;
    const std::size_t e = to ? r.lower_bound(hybridcast::parse_date(*to) + std::chrono::days{1}) : r.size();
    r = r.slice(b, std::max(b, e));
    if (r.empty()) {
        throw hybridcast::Error(hybridcast::ErrorCode::TooShort, "no returns in the requested range");
    }
    std::cout << hx::format_descriptive(data, hybridcast::describe(r));
    std::cout << "  from " << hybridcast::format_date(r.dates().front()) << " to "
              << hybridcast::format_date(r.dates().back()) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid econometric / machine-learning return forecasting with walk-forward backtests"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment described by a YAML config");
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    bool audit = false;
    bool quiet = false;
    run->add_option("--config,-c", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out,-o", out, "Output directory (overrides the config)");
    run->add_option("--seed", seed, "Base seed (overrides the config)");
    run->add_option("--jobs,-j", jobs, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    run->add_flag("--audit", audit, "Recompute every forecast from its own prefix and check data dates");
    run->add_flag("--quiet,-q", quiet, "No progress output");

    auto* desc = app.add_subcommand("describe", "Summary statistics of daily log returns");
    std::string data;
    hybridcast::CsvSpec csv;
    std::optional<std::string> from;
    std::optional<std::string> to;
    desc->add_option("--data,-d", data, "Price CSV")->required()->check(CLI::ExistingFile);
    desc->add_option("--date-column", csv.date_column, "Date column name")->capture_default_str();
    desc->add_option("--close-column", csv.close_column, "Close column name")->capture_default_str();
    desc->add_option("--from", from, "First return date (YYYY-MM-DD)");
    desc->add_option("--to", to, "Last return date (YYYY-MM-DD)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            return cmd_run(config_path, out, seed, jobs, audit, quiet);
        }
        return cmd_describe(data, csv, from, to);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
