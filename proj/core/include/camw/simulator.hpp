#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "camw/controller.hpp"
#include "camw/domain.hpp"
#include "camw/rng.hpp"

namespace camw {

/// Run results. Per-slot totals are recorded after service and arrivals, so
/// entry t is the state at the end of slot t.
struct Metrics {
    long long horizon = 0;
    std::array<long long, 4> arrivals{};
    std::array<long long, 4> departures{};
    std::vector<int> total_queue_per_slot;
    long long blocking_events = 0;
    long long conservation_violations = 0;

    long long total_arrivals() const;
    long long total_departures() const;

    /// Departed / arrived over the horizon; 1 when nothing arrived.
    double efficiency() const;

    /// Time average of the per-queue mean queue size (total / 4).
    double mean_queue_average() const;
    double total_queue_average() const;
    int final_total_queue() const;
};

/// End-of-slot snapshot. `blocking_events` is the cumulative count through
/// every phase that has ended by this slot; rows for a phase's final slot are
/// emitted after that phase's bookkeeping, so the count and the learned flags
/// are exact at phase boundaries.
struct TraceRow {
    long long slot = 0;
    int phase_id = 0;
    std::array<int, 4> queue_lengths{};
    std::array<int, 4> arrivals{};
    std::array<int, 4> departures{};
    std::array<std::uint8_t, 4> blocked{};  // bit 0: straight, bit 1: left
    long long blocking_events = 0;
};

using TraceSink = std::function<void(const TraceRow&)>;

/// One service attempt on a single mixed lane: the head departs iff it
/// matches the served movement; a mismatched head simply stays put, blocking
/// the lane for the rest of the phase.
bool serve_slot(ApproachQueueI& queue, Movement movement);

/// One service attempt on a two-slot approach: the dedicated slot for the
/// served movement departs if occupied, then the shared head may advance into
/// that slot when it matches. With `absorb_opposite` the head may also slide
/// into the opposite slot mid-phase; by default the opposite slot refills
/// only at phase boundaries, keeping the dynamics aligned with the
/// expectation model.
bool serve_slot(ApproachQueueII& queue, Movement movement,
                bool absorb_opposite = false);

/// Phase-boundary refill: the shared head keeps advancing into its matching
/// dedicated slot until that slot is occupied or the lane is empty.
void refill_boundary(ApproachQueueII& queue);

/// Bernoulli arrival draw for one approach and slot: straight with
/// probability lambda1, left with lambda2, otherwise nothing. The
/// communication flag comes from its own stream so arrival patterns do not
/// change when rho does.
std::optional<Vehicle> sample_arrival(RngStream& arrival_rng, RngStream& comm_rng,
                                      double lambda1, double lambda2, double rho,
                                      long long slot);

Metrics run(const SimConfig& config);
Metrics run(const SimConfig& config, const TraceSink& trace);

}  // namespace camw
