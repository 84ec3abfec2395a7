#pragma once

#include <vector>

#include "camw/domain.hpp"

namespace camw {

/// One communicating vehicle reduced to what matters for a given phase:
/// 1-based position in the lane and whether its direction matches the served
/// movement.
struct AlignedComm {
    int position = 0;
    bool aligned = false;

    friend bool operator==(const AlignedComm&, const AlignedComm&) = default;
};

/// A lane as the expectation machinery sees it: a departure horizon, the
/// communicating vehicles within it, and the probability that an unknown
/// vehicle is aligned with the served movement (p1 for straight-serving
/// phases, p2 for left-serving ones).
struct AlignmentView {
    int horizon = 0;
    std::vector<AlignedComm> comm;  // positions strictly increasing, <= horizon
    double p_aligned = 0.5;

    double p_blocked() const { return 1.0 - p_aligned; }

    void validate() const;  // throws std::invalid_argument
};

/// Distribution of the number of vehicles that depart during one green phase.
class PassCountDistribution {
  public:
    explicit PassCountDistribution(std::vector<double> probabilities);

    int max_count() const { return static_cast<int>(probs_.size()) - 1; }
    double probability(int count) const { return probs_.at(count); }
    const std::vector<double>& probabilities() const { return probs_; }

    double mean() const;
    double total() const;

  private:
    std::vector<double> probs_;
};

/// Drops everything at and beyond the first misaligned communicating vehicle:
/// the horizon becomes v_L - 1 and only the aligned entries in front remain.
/// Views with no misaligned entry pass through unchanged.
AlignmentView truncate_at_first_misaligned(const AlignmentView& view);

/// Departure-count distribution for a single-lane view whose communicating
/// vehicles are all aligned. Piecewise geometric: within each block between
/// known-aligned vehicles the count keeps the geometric decay, the count just
/// short of a known-aligned vehicle has probability zero, and the full
/// horizon absorbs the remaining mass. Callers with a misaligned entry must
/// truncate first.
PassCountDistribution pass_count_distribution(const AlignmentView& view);

/// Closed-form expected departures from a single mixed lane during one green
/// phase. Misaligned communicating vehicles are handled by truncation.
/// Degenerate priors (p_aligned of 0 or 1) are evaluated through the
/// distribution, avoiding the 0/0 in the algebraic form.
double expected_pass_queue1(const AlignmentView& view);

/// Expected departures for the two-slot model. `shared` describes the shared
/// lane only (horizon = shared-lane length); the guaranteed departures g and
/// the sub-queue horizon are derived from slot occupancy:
///   serving slot occupied + other slot empty + shared non-empty -> the
///     shared head provably matches the served movement: g = 2, sub-queue is
///     the shared lane minus its head, horizon n - 2;
///   serving slot occupied otherwise -> g = 1, sub-queue is the shared lane,
///     horizon n - 1;
///   serving slot empty -> nothing reachable, 0.
/// Returns g plus the single-lane expectation of the sub-queue.
double expected_pass_queue2(const SlotView& slots, Movement serving,
                            const AlignmentView& shared, int green_slots);

/// Exhaustive-enumeration oracle for the single-lane expectation: walks every
/// direction assignment of the unknown vehicles (at most 2^horizon cases,
/// horizon capped at 20) and averages the resulting departure counts. Kept
/// deliberately independent of the closed form above.
double enumerate_expected_pass(const AlignmentView& view);

/// Single-lane view for one phase: horizon min(n, Q), communicating vehicles
/// beyond it discarded.
AlignmentView single_lane_alignment(const CommView& view, Movement serving,
                                    const EstimatorParams& params);

/// Shared-lane view for the two-slot model: horizon is the shared-lane
/// length; expected_pass_queue2 derives the sub-queue horizon itself.
AlignmentView shared_lane_alignment(const CommView& view, Movement serving,
                                    const EstimatorParams& params);

}  // namespace camw
