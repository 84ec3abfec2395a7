#pragma once

#include <array>
#include <optional>

#include "camw/domain.hpp"
#include "camw/rng.hpp"

namespace camw {

/// What the light has inferred per approach from watching green phases fail:
/// a movement whose estimate must be zeroed, and the head-of-line direction
/// implied by that failure. Cleared the moment the approach produces any
/// departure. Unused for the two-slot model, where the dedicated slots expose
/// the same information directly.
class LearnedState {
  public:
    bool blocked(Approach approach, Movement movement) const {
        return entries_[slot_of(approach)].blocked[static_cast<int>(movement)];
    }

    std::optional<Movement> inferred_hol(Approach approach) const {
        return entries_[slot_of(approach)].inferred;
    }

    void mark_blocked(Approach approach, Movement movement) {
        auto& entry = entries_[slot_of(approach)];
        entry.blocked[static_cast<int>(movement)] = true;
        entry.inferred = other(movement);
    }

    void clear(Approach approach) { entries_[slot_of(approach)] = Entry{}; }

    bool any_blocked(Approach approach) const {
        const auto& entry = entries_[slot_of(approach)];
        return entry.blocked[0] || entry.blocked[1];
    }

    friend bool operator==(const LearnedState&, const LearnedState&) = default;

  private:
    struct Entry {
        std::array<bool, 2> blocked{false, false};
        std::optional<Movement> inferred;

        friend bool operator==(const Entry&, const Entry&) = default;
    };
    std::array<Entry, 4> entries_{};
};

/// End-of-green bookkeeping: a green for (approach, movement) that moved
/// nothing out of a non-empty queue marks that movement blocked and pins the
/// head-of-line to the opposite movement; any departure wipes the approach's
/// learned state.
void update_learning(LearnedState& learned, Approach approach, Movement served,
                     int departures, int queue_length_before);

/// Options steering the connectivity-aware estimate.
struct CamwOptions {
    /// Feed the inferred head-of-line direction into the complementary
    /// movement's estimate as if the vehicle had announced it.
    bool hol_inference = true;
};

/// The connectivity-aware per-(approach, phase) estimate: 0 when the phase
/// does not serve the approach or the movement is learned blocked, otherwise
/// the expectation module's value with any inferred head-of-line direction
/// injected. Two-slot views always get the raw expectation.
double effective_estimate(const CommView& view, Phase phase,
                          const EstimatorParams& params, const LearnedState& learned,
                          const CamwOptions& options = {});

using PhaseWeights = std::array<double, 4>;  // indexed by phase id - 1

PhaseWeights camw_phase_weights(const std::array<CommView, 4>& views,
                                const EstimatorParams& params,
                                const LearnedState& learned,
                                const CamwOptions& options = {});

PhaseWeights maxweight_phase_weights(const std::array<CommView, 4>& views,
                                     QueueModel model);

/// Argmax over the four phases; exact ties resolved by tie_break. The random
/// tie-break draws from `tie_rng`, which must be provided in that mode.
Phase select_phase(const PhaseWeights& weights, TieBreak tie_break,
                   RngStream* tie_rng = nullptr);

Phase decide_phase_camw(const std::array<CommView, 4>& views,
                        const EstimatorParams& params, const LearnedState& learned,
                        TieBreak tie_break, RngStream* tie_rng = nullptr,
                        const CamwOptions& options = {});

Phase decide_phase_maxweight(const std::array<CommView, 4>& views, QueueModel model,
                             TieBreak tie_break, RngStream* tie_rng = nullptr);

/// Pre-timed baseline: phases rotate on a fixed cycle, one cycle entry per
/// green duration.
Phase decide_phase_fixed(long long slot, int green_slots,
                         const std::vector<Phase>& cycle);

}  // namespace camw
