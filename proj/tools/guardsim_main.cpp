// Command-line front end: run a scenario, compare the three policies, or
// evaluate the closed-form oracles.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "guardsim/oracle.hpp"
#include "guardsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace guardsim;

namespace {

bool write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << contents;
    out.close();
    return static_cast<bool>(out);
}

Scenario load_with_seed(const std::string& config, std::optional<std::uint64_t> seed) {
    Scenario sc = load_scenario(config);
    if (seed) sc.sim.seed = *seed;
    return sc;
}

fs::path summary_path_for(const fs::path& timeseries) {
    fs::path p = timeseries;
    p.replace_filename(timeseries.stem().string() + "_summary.csv");
    return p;
}

int emit(const fs::path& timeseries_path, const fs::path& summary_path,
         const std::vector<ReplicationResult>& results) {
    std::ostringstream ts, summary;
    write_timeseries_csv(ts, results);
    write_summary_csv(summary, summarize(results));
    if (!write_file(timeseries_path, ts.str())) {
        std::cerr << "error: cannot write " << timeseries_path << '\n';
        return 3;
    }
    if (!write_file(summary_path, summary.str())) {
        std::cerr << "error: cannot write " << summary_path << '\n';
        return 3;
    }
    std::cout << summary.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-cell guard-channel admission control simulator"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::uint64_t> seed;
    std::string output;

    auto* run = app.add_subcommand("run", "Run a scenario; writes a time-series CSV and <name>_summary.csv");
    run->add_option("--config", config, "Scenario JSON")->required();
    run->add_option("--seed", seed, "Override run.seed");
    run->add_option("--output", output, "Time-series CSV path")->required();

    auto* compare = app.add_subcommand("compare", "Run FCA, static guard and ACAS on identical traffic");
    compare->add_option("--config", config, "Scenario JSON")->required();
    compare->add_option("--seed", seed, "Override run.seed");
    compare->add_option("--output", output, "Output directory")->required();

    auto* oracle = app.add_subcommand("oracle", "Closed-form blocking probabilities");
    oracle->require_subcommand(1);
    bool show_distribution = false;
    oracle->add_flag("--distribution", show_distribution, "Also print the stationary distribution");
    int channels = 0, guard = 0;
    double load = 0.0, lambda_n = 0.0, lambda_h = 0.0, mu = 0.0;
    auto* eb = oracle->add_subcommand("erlang-b", "Erlang-B blocking for C channels and load a");
    eb->add_option("C", channels)->required();
    eb->add_option("a", load)->required();
    auto* gc = oracle->add_subcommand("guard", "Static guard-channel birth-death chain");
    gc->add_option("C", channels)->required();
    gc->add_option("GCh", guard)->required();
    gc->add_option("lambda_n", lambda_n)->required();
    gc->add_option("lambda_h", lambda_h)->required();
    gc->add_option("mu", mu)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const Scenario sc = load_with_seed(config, seed);
            const auto results = run_replications(sc.sim, sc.replications, replication_threads());
            return emit(output, summary_path_for(output), results);
        }
        if (compare->parsed()) {
            const Scenario sc = load_with_seed(config, seed);
            std::error_code ec;
            fs::create_directories(output, ec);
            if (ec) {
                std::cerr << "error: cannot create " << output << ": " << ec.message() << '\n';
                return 3;
            }
            const auto results = run_comparison(sc, replication_threads());
            return emit(fs::path(output) / "compare_timeseries.csv", fs::path(output) / "compare_summary.csv",
                        results);
        }
        if (eb->parsed()) {
            const double b = erlang_b(channels, load);
            std::cout << "Pb,Ph\n" << format_probability(b) << ',' << format_probability(b) << '\n';
            if (show_distribution && channels >= 1 && load > 0.0) {
                const OracleResult r = guard_channel_stationary(channels, 0, load, 0.0, 1.0);
                std::cout << "n,probability\n";
                for (std::size_t n = 0; n < r.state_probs.size(); ++n)
                    std::cout << n << ',' << format_probability(r.state_probs[n]) << '\n';
            }
            return 0;
        }
        if (gc->parsed()) {
            const OracleResult r = guard_channel_stationary(channels, guard, lambda_n, lambda_h, mu);
            std::cout << "Pb,Ph\n" << format_probability(r.Pb) << ',' << format_probability(r.Ph) << '\n';
            if (show_distribution) {
                std::cout << "n,probability\n";
                for (std::size_t n = 0; n < r.state_probs.size(); ++n)
                    std::cout << n << ',' << format_probability(r.state_probs[n]) << '\n';
            }
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (oracle->parsed()) std::cerr << oracle->help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
