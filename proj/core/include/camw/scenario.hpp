#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "camw/domain.hpp"
#include "camw/simulator.hpp"

namespace camw {

/// One experimental grid: the Cartesian product of schedulers, communication
/// probabilities, arrival points and replicate indices. Every run gets its
/// own seed derived from the base seed and the run's coordinates, so results
/// never depend on iteration order and a given coordinate always sees the
/// same randomness regardless of which grid it belongs to.
struct ScenarioSpec {
    std::string name = "scenario";
    SimConfig base;
    std::vector<SchedulerKind> schedulers;  // empty: just base.scheduler
    std::vector<double> rhos;               // empty: just base.rho

    // Arrival sweep. When `loads` is non-empty each entry is the total
    // per-approach arrival rate, split as lambda1 = split_ratio * lambda2;
    // otherwise base.lambda1/lambda2 are used as the single point.
    std::vector<double> loads;
    double split_ratio = 1.0;

    int replications = 1;
    int interval = 100;  // series reporting period, in slots
    std::string out_dir;

    void validate() const;

    std::vector<SchedulerKind> scheduler_list() const;
    std::vector<double> rho_list() const;
    std::vector<std::pair<double, double>> lambda_points() const;
};

/// Known preset names: fig5, fig6, fig7, fig8.
bool is_preset_name(const std::string& name);
ScenarioSpec preset_spec(const std::string& name);

/// Builds a ScenarioSpec from a JSON config document. A "preset" key loads
/// the named preset first; any other keys override it. Unknown keys, bad
/// ranges and inconsistent rates are reported with the offending field.
ScenarioSpec parse_config(const std::string& text);
ScenarioSpec load_config_file(const std::string& path);

/// Resolves a config file, a preset name, or both (preset as the base, config
/// keys layered on top). At least one must be given; a preset named in both
/// places must match.
ScenarioSpec load_spec(const std::string& config_path, const std::string& preset);

std::uint64_t derived_seed(std::uint64_t base_seed, SchedulerKind scheduler,
                           QueueModel model, double rho, double lambda1,
                           double lambda2, int replicate);

/// Across-replication aggregate for one grid coordinate. Standard deviations
/// are the sample kind and meaningless (written empty) for one replication.
struct SummaryRow {
    SchedulerKind scheduler = SchedulerKind::Camw;
    QueueModel model = QueueModel::QueueI;
    double rho = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    int green_slots = 0;
    long long horizon = 0;
    int replications = 0;
    double mean_queue = 0.0;        // time average of the per-queue mean
    double mean_queue_sd = 0.0;
    double final_mean_queue = 0.0;  // per-queue mean at the last slot
    double final_mean_queue_sd = 0.0;
    double efficiency = 0.0;
    double efficiency_sd = 0.0;
    double blocking_events = 0.0;   // mean blocked greens per run
    long long conservation_violations = 0;  // summed over replications
};

/// Runs the whole grid. When `series` is given, one CSV row is written per
/// reporting interval per run (plus a final row); when `trace` is given, one
/// row per slot per run. Both streams get headers. Output is byte-identical
/// for identical specs.
std::vector<SummaryRow> run_scenarios(const ScenarioSpec& spec,
                                      std::ostream* series = nullptr,
                                      std::ostream* trace = nullptr);

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// Serialized series CSV for the whole spec; two calls must agree byte for
/// byte (the determinism probe used by the acceptance checks).
std::string series_csv_string(const ScenarioSpec& spec);

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool all_pass() const;
};

/// Evaluates the reproduction criteria that are defined over summary rows
/// (stability pattern, two-slot queue averages, efficiency-vs-load pattern,
/// efficiency-vs-connectivity trend). Thresholds are fixed here, not
/// configurable.
AcceptanceReport check_acceptance(const std::vector<SummaryRow>& rows);

}  // namespace camw
