// Scenario runner: parses a scenario file, runs its tasks and writes the report.

#include "minigal/error.hpp"
#include "minigal/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

int main(int argc, char** argv)
{
    CLI::App app{"Run a minigal scenario and emit a deterministic report"};
    std::string scenario_path, report_path, budget;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    bool canonical = false;
    app.add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    app.add_option("--budget", budget, "preset (default|small|large) or key=value list, e.g. factors=1,constants=20");
    app.add_option("--threads", threads, "worker threads for pair verdicts (0 = hardware)")->default_val(1);
    app.add_option("--report", report_path, "write the report here instead of stdout");
    app.add_option("--seed", seed, "seed for randomized property tasks")->default_val(1);
    app.add_flag("--canonical", canonical, "print the scenario in canonical form and exit");
    CLI11_PARSE(app, argc, argv);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    minigal::Scenario sc;
    try {
        sc = minigal::load_scenario(scenario_path);
    } catch (minigal::parse_error const& e) {
        std::cerr << scenario_path << ":" << e.line << ":" << e.column << ": " << e.message << "\n";
        return 2;
    } catch (minigal::error const& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (canonical) {
        std::cout << minigal::serialize(sc);
        return 0;
    }

    minigal::RunOptions opts;
    opts.threads = threads;
    opts.seed = seed;
    minigal::RunResult res;
    try {
        if (!budget.empty()) opts.budget = minigal::BudgetSpec::parse(budget);
        res = minigal::run_scenario(sc, opts);
    } catch (minigal::parse_error const& e) {
        std::cerr << scenario_path << ":" << e.line << ":" << e.column << ": " << e.message << "\n";
        return 2;
    } catch (minigal::error const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (report_path.empty()) {
        std::cout << res.report;
    } else {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << report_path << "\n";
            return 2;
        }
        out << res.report;
    }
    return res.failed == 0 ? 0 : 1;
}
