#include "camw/controller.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "camw/estimator.hpp"

namespace camw {

void update_learning(LearnedState& learned, Approach approach, Movement served,
                     int departures, int queue_length_before) {
    if (departures > 0) {
        learned.clear(approach);
    } else if (queue_length_before > 0) {
        learned.mark_blocked(approach, served);
    }
}

double effective_estimate(const CommView& view, Phase phase,
                          const EstimatorParams& params, const LearnedState& learned,
                          const CamwOptions& options) {
    if (!phase.serves(view.approach)) return 0.0;
    const Movement serving = phase.movement();

    if (view.slots) {
        return expected_pass_queue2(*view.slots, serving,
                                    shared_lane_alignment(view, serving, params),
                                    params.green_slots);
    }

    if (learned.blocked(view.approach, serving)) return 0.0;

    AlignmentView alignment = single_lane_alignment(view, serving, params);
    if (options.hol_inference && alignment.horizon >= 1) {
        const auto inferred = learned.inferred_hol(view.approach);
        const bool head_known =
            !alignment.comm.empty() && alignment.comm.front().position == 1;
        if (inferred && !head_known) {
            alignment.comm.insert(alignment.comm.begin(),
                                  AlignedComm{1, *inferred == serving});
        }
    }
    return expected_pass_queue1(alignment);
}

PhaseWeights camw_phase_weights(const std::array<CommView, 4>& views,
                                const EstimatorParams& params,
                                const LearnedState& learned,
                                const CamwOptions& options) {
    PhaseWeights weights{};
    for (const Phase phase : all_phases()) {
        double weight = 0.0;
        for (const Approach approach : phase.served_approaches()) {
            const CommView& view = views[slot_of(approach)];
            weight += view.queue_length *
                      effective_estimate(view, phase, params, learned, options);
        }
        weights[phase.id() - 1] = weight;
    }
    return weights;
}

PhaseWeights maxweight_phase_weights(const std::array<CommView, 4>& views,
                                     QueueModel model) {
    PhaseWeights weights{};
    for (const Phase phase : all_phases()) {
        double weight = 0.0;
        for (const Approach approach : phase.served_approaches()) {
            const CommView& view = views[slot_of(approach)];
            if (view.queue_length == 0) continue;
            int k = 0;
            if (model == QueueModel::QueueII) {
                if (!view.slots)
                    throw std::invalid_argument("maxweight: two-slot view expected");
                const bool occupied = phase.movement() == Movement::Left
                                          ? view.slots->left_occupied
                                          : view.slots->straight_occupied;
                k = occupied ? 1 : 0;
            } else {
                const bool head_known =
                    !view.comm.empty() && view.comm.front().position == 1;
                if (head_known)
                    k = (view.comm.front().direction == phase.movement()) ? 1 : 0;
                else
                    k = 1;  // either phase of this approach may move the head
            }
            weight += static_cast<double>(view.queue_length) * k;
        }
        weights[phase.id() - 1] = weight;
    }
    return weights;
}

Phase select_phase(const PhaseWeights& weights, TieBreak tie_break,
                   RngStream* tie_rng) {
    const double best = *std::max_element(weights.begin(), weights.end());
    std::vector<int> tied;
    for (int i = 0; i < 4; ++i)
        if (weights[i] == best) tied.push_back(i + 1);

    if (tie_break == TieBreak::LowestPhaseIndex || tied.size() == 1)
        return Phase(tied.front());
    if (tie_rng == nullptr)
        throw std::invalid_argument("seeded tie-break requires an RNG stream");
    return Phase(tied[tie_rng->next_index(static_cast<std::uint32_t>(tied.size()))]);
}

Phase decide_phase_camw(const std::array<CommView, 4>& views,
                        const EstimatorParams& params, const LearnedState& learned,
                        TieBreak tie_break, RngStream* tie_rng,
                        const CamwOptions& options) {
    return select_phase(camw_phase_weights(views, params, learned, options),
                        tie_break, tie_rng);
}

Phase decide_phase_maxweight(const std::array<CommView, 4>& views, QueueModel model,
                             TieBreak tie_break, RngStream* tie_rng) {
    return select_phase(maxweight_phase_weights(views, model), tie_break, tie_rng);
}

Phase decide_phase_fixed(long long slot, int green_slots,
                         const std::vector<Phase>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("fixed-time cycle is empty");
    if (green_slots < 1) throw std::invalid_argument("green_slots must be >= 1");
    const auto epoch = static_cast<std::size_t>(slot / green_slots);
    return cycle[epoch % cycle.size()];
}

}  // namespace camw
