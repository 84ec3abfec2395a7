// Command-line front end: scenario runs, closed-form verification, and
// acceptance checks over previously written summaries.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "camw/scenario.hpp"
#include "camw/verify.hpp"

namespace {

namespace fs = std::filesystem;

std::string default_out_dir() {
    const char* env = std::getenv("CAMW_OUT_DIR");
    return (env != nullptr && *env != '\0') ? env : ".";
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void print_summary_table(const std::vector<camw::SummaryRow>& rows) {
    std::printf("%-10s %-7s %5s %7s %12s %12s %11s %9s\n", "scheduler", "model",
                "rho", "load", "mean_queue", "final_queue", "efficiency",
                "blocked");
    for (const auto& r : rows) {
        std::printf("%-10s %-7s %5.2f %7.3g %12.4f %12.4f %11.4f %9.1f\n",
                    camw::to_string(r.scheduler), camw::to_string(r.model), r.rho,
                    r.lambda1 + r.lambda2, r.mean_queue, r.final_mean_queue,
                    r.efficiency, r.blocking_events);
    }
}

int do_run(const std::string& config_path, const std::string& preset,
           bool seed_given, std::uint64_t seed, int replications,
           const std::string& out_flag, bool trace) {
    camw::ScenarioSpec spec = camw::load_spec(config_path, preset);
    if (seed_given) spec.base.seed = seed;
    if (replications > 0) spec.replications = replications;
    if (!out_flag.empty()) spec.out_dir = out_flag;

    const fs::path dir = spec.out_dir.empty() ? default_out_dir() : spec.out_dir;
    fs::create_directories(dir);

    const fs::path series_path = dir / (spec.name + "_series.csv");
    const fs::path summary_path = dir / (spec.name + "_summary.csv");
    std::ofstream series = open_output(series_path);

    std::vector<camw::SummaryRow> rows;
    if (trace) {
        const fs::path trace_path = dir / (spec.name + "_trace.csv");
        std::ofstream trace_out = open_output(trace_path);
        rows = camw::run_scenarios(spec, &series, &trace_out);
        std::printf("trace:   %s\n", trace_path.string().c_str());
    } else {
        rows = camw::run_scenarios(spec, &series, nullptr);
    }

    std::ofstream summary = open_output(summary_path);
    camw::write_summary_csv(rows, summary);

    print_summary_table(rows);
    std::printf("series:  %s\nsummary: %s\n", series_path.string().c_str(),
                summary_path.string().c_str());
    return 0;
}

int do_verify() {
    bool all_pass = true;
    for (const camw::VerifyResult& r : camw::run_verification()) {
        std::printf("[%s] %s: %lld cases, worst error %.3g (%.0f ms)\n",
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.cases,
                    r.worst_error, r.elapsed_ms);
        if (!r.pass) {
            std::printf("       first failure: %s\n", r.detail.c_str());
            all_pass = false;
        }
    }
    return all_pass ? 0 : 1;
}

int do_accept(const std::vector<std::string>& inputs) {
    std::vector<camw::SummaryRow> rows;
    for (const std::string& path : inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open '" + path + "'");
        auto file_rows = camw::read_summary_csv(in);
        rows.insert(rows.end(), file_rows.begin(), file_rows.end());
    }

    const camw::AcceptanceReport report = camw::check_acceptance(rows);
    for (const camw::CriterionResult& c : report.criteria) {
        std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Traffic-intersection phase scheduling experiments: connectivity-aware "
        "max-weight against max-weight and fixed-time baselines"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand(
        "run", "Run a scenario grid and write series/summary CSVs");
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::uint64_t seed = 0;
    int replications = 0;
    bool trace = false;
    run_cmd->add_option("--config", config_path, "JSON scenario config file");
    run_cmd
        ->add_option("--preset", preset,
                     "Built-in scenario grid: fig5, fig6, fig7 or fig8")
        ->check(CLI::IsMember({"fig5", "fig6", "fig7", "fig8"}));
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Base seed override");
    run_cmd->add_option("--replications", replications,
                        "Replications per grid point override");
    run_cmd->add_option(
        "--out", out_dir,
        "Output directory (default: $CAMW_OUT_DIR, else current directory)");
    run_cmd->add_flag("--trace", trace, "Also write a per-slot trace CSV");

    auto* verify_cmd = app.add_subcommand(
        "verify", "Check the closed-form expectations against brute-force "
                  "oracles");

    auto* accept_cmd = app.add_subcommand(
        "accept", "Evaluate the reproduction checks over summary CSVs");
    std::vector<std::string> inputs;
    accept_cmd->add_option("--in", inputs, "Summary CSV file(s)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return do_run(config_path, preset, seed_opt->count() > 0, seed,
                          replications, out_dir, trace);
        }
        if (verify_cmd->parsed()) return do_verify();
        if (accept_cmd->parsed()) return do_accept(inputs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
