#include "camw/simulator.hpp"

#include <numeric>
#include <stdexcept>

namespace camw {

long long Metrics::total_arrivals() const {
    return std::accumulate(arrivals.begin(), arrivals.end(), 0LL);
}

long long Metrics::total_departures() const {
    return std::accumulate(departures.begin(), departures.end(), 0LL);
}

double Metrics::efficiency() const {
    const long long arrived = total_arrivals();
    if (arrived == 0) return 1.0;
    return static_cast<double>(total_departures()) / static_cast<double>(arrived);
}

double Metrics::total_queue_average() const {
    if (total_queue_per_slot.empty()) return 0.0;
    const double sum = std::accumulate(total_queue_per_slot.begin(),
                                       total_queue_per_slot.end(), 0.0);
    return sum / static_cast<double>(total_queue_per_slot.size());
}

double Metrics::mean_queue_average() const { return total_queue_average() / 4.0; }

int Metrics::final_total_queue() const {
    return total_queue_per_slot.empty() ? 0 : total_queue_per_slot.back();
}

bool serve_slot(ApproachQueueI& queue, Movement movement) {
    if (queue.empty()) return false;
    if (queue.front().direction != movement) return false;
    queue.pop_front();
    return true;
}

void refill_boundary(ApproachQueueII& queue) {
    while (!queue.shared_empty() &&
           !queue.slot_occupied(queue.shared_front().direction)) {
        queue.fill_slot(queue.pop_shared_front());
    }
}

bool serve_slot(ApproachQueueII& queue, Movement movement, bool absorb_opposite) {
    bool departed = false;
    if (queue.slot_occupied(movement)) {
        queue.take_slot(movement);
        departed = true;
    }
    if (absorb_opposite) {
        refill_boundary(queue);
    } else if (!queue.shared_empty() &&
               queue.shared_front().direction == movement &&
               !queue.slot_occupied(movement)) {
        queue.fill_slot(queue.pop_shared_front());
    }
    return departed;
}

std::optional<Vehicle> sample_arrival(RngStream& arrival_rng, RngStream& comm_rng,
                                      double lambda1, double lambda2, double rho,
                                      long long slot) {
    const double u = arrival_rng.next_uniform();
    Movement direction;
    if (u < lambda1) {
        direction = Movement::Straight;
    } else if (u < lambda1 + lambda2) {
        direction = Movement::Left;
    } else {
        return std::nullopt;
    }
    return Vehicle{direction, comm_rng.next_bernoulli(rho), slot};
}

namespace {

// Stream tags. Each approach gets its own arrival and communication streams
// so that changing rho never perturbs the arrival sequence.
constexpr std::uint64_t kArrivalTag = 0x10;
constexpr std::uint64_t kCommTag = 0x20;
constexpr std::uint64_t kTieTag = 0x30;

template <typename QueueT>
int queue_size(const QueueT& q) {
    return q.size();
}

template <typename QueueT>
struct IntersectionState {
    std::array<QueueT, 4> queues{};
    std::array<RngStream, 4> arrival_rng;
    std::array<RngStream, 4> comm_rng;
    RngStream tie_rng;
    LearnedState learned;

    explicit IntersectionState(std::uint64_t seed)
        : arrival_rng{RngStream(mix_seed(seed, kArrivalTag + 0)),
                      RngStream(mix_seed(seed, kArrivalTag + 1)),
                      RngStream(mix_seed(seed, kArrivalTag + 2)),
                      RngStream(mix_seed(seed, kArrivalTag + 3))},
          comm_rng{RngStream(mix_seed(seed, kCommTag + 0)),
                   RngStream(mix_seed(seed, kCommTag + 1)),
                   RngStream(mix_seed(seed, kCommTag + 2)),
                   RngStream(mix_seed(seed, kCommTag + 3))},
          tie_rng(mix_seed(seed, kTieTag)) {}

    int total_queue() const {
        int total = 0;
        for (const auto& q : queues) total += queue_size(q);
        return total;
    }
};

template <typename QueueT>
std::array<CommView, 4> collect_views(const std::array<QueueT, 4>& queues) {
    std::array<CommView, 4> views{};
    for (Approach a : kAllApproaches) {
        views[slot_of(a)] = make_comm_view(queues[slot_of(a)], a);
    }
    return views;
}

template <typename QueueT>
Phase decide(const SimConfig& config, const std::array<CommView, 4>& views,
             const EstimatorParams& params, IntersectionState<QueueT>& state,
             long long slot) {
    static const std::vector<Phase> kCycle = {Phase(1), Phase(2), Phase(3),
                                              Phase(4)};
    switch (config.scheduler) {
        case SchedulerKind::Camw:
            return decide_phase_camw(views, params, state.learned,
                                     config.tie_break, &state.tie_rng,
                                     CamwOptions{config.hol_inference});
        case SchedulerKind::MaxWeight:
            return decide_phase_maxweight(views, config.model, config.tie_break,
                                          &state.tie_rng);
        case SchedulerKind::FixedTime:
            return decide_phase_fixed(slot, config.green_slots, kCycle);
    }
    throw std::logic_error("unknown scheduler");
}

template <typename QueueT>
Metrics run_impl(const SimConfig& config, const TraceSink* trace) {
    constexpr bool kTwoSlot = std::is_same_v<QueueT, ApproachQueueII>;

    IntersectionState<QueueT> state(config.seed);
    const EstimatorParams params = config.estimator_params();

    Metrics metrics;
    metrics.horizon = config.horizon;
    metrics.total_queue_per_slot.reserve(
        static_cast<std::size_t>(config.horizon));

    long long t = 0;
    while (t < config.horizon) {
        if constexpr (kTwoSlot) {
            for (auto& q : state.queues) refill_boundary(q);
        }

        const auto views = collect_views(state.queues);
        const Phase phase = decide(config, views, params, state, t);
        const auto served = phase.served_approaches();
        const Movement movement = phase.movement();

        std::array<int, 2> length_before{};
        std::array<int, 2> departed{};
        for (std::size_t i = 0; i < served.size(); ++i) {
            length_before[i] = views[slot_of(served[i])].queue_length;
        }

        auto finish_row = [&](TraceRow& row) {
            for (Approach a : kAllApproaches) {
                const std::size_t k = slot_of(a);
                row.queue_lengths[k] = queue_size(state.queues[k]);
                std::uint8_t flags = 0;
                if (state.learned.blocked(a, Movement::Straight)) flags |= 1;
                if (state.learned.blocked(a, Movement::Left)) flags |= 2;
                row.blocked[k] = flags;
            }
            row.blocking_events = metrics.blocking_events;
            (*trace)(row);
        };

        std::optional<TraceRow> phase_end_row;
        for (int g = 0; g < config.green_slots && t < config.horizon; ++g) {
            TraceRow row;
            row.slot = t;
            row.phase_id = phase.id();

            for (std::size_t i = 0; i < served.size(); ++i) {
                auto& queue = state.queues[slot_of(served[i])];
                bool left_queue;
                if constexpr (kTwoSlot) {
                    left_queue = serve_slot(queue, movement, config.queue2_absorb);
                } else {
                    left_queue = serve_slot(queue, movement);
                }
                if (left_queue) {
                    ++departed[i];
                    ++metrics.departures[slot_of(served[i])];
                    row.departures[slot_of(served[i])] = 1;
                    state.learned.clear(served[i]);
                }
            }

            for (Approach a : kAllApproaches) {
                const std::size_t k = slot_of(a);
                auto vehicle =
                    sample_arrival(state.arrival_rng[k], state.comm_rng[k],
                                   config.lambda1, config.lambda2, config.rho, t);
                if (vehicle) {
                    state.queues[k].push_back(*vehicle);
                    ++metrics.arrivals[k];
                    row.arrivals[k] = 1;
                }
            }

            metrics.total_queue_per_slot.push_back(state.total_queue());

            for (Approach a : kAllApproaches) {
                const std::size_t k = slot_of(a);
                const long long held = queue_size(state.queues[k]);
                if (metrics.arrivals[k] != metrics.departures[k] + held) {
                    ++metrics.conservation_violations;
                }
            }

            ++t;
            if (trace != nullptr) {
                const bool phase_ends =
                    (g + 1 == config.green_slots) || (t == config.horizon);
                if (phase_ends) {
                    phase_end_row = row;
                } else {
                    finish_row(row);
                }
            }
        }

        for (std::size_t i = 0; i < served.size(); ++i) {
            if (departed[i] == 0 && length_before[i] > 0) {
                ++metrics.blocking_events;
            }
            if constexpr (!kTwoSlot) {
                update_learning(state.learned, served[i], movement, departed[i],
                                length_before[i]);
            }
        }
        if (phase_end_row) finish_row(*phase_end_row);
    }
    return metrics;
}

}  // namespace

Metrics run(const SimConfig& config) {
    config.validate();
    if (config.model == QueueModel::QueueI) {
        return run_impl<ApproachQueueI>(config, nullptr);
    }
    return run_impl<ApproachQueueII>(config, nullptr);
}

Metrics run(const SimConfig& config, const TraceSink& trace) {
    config.validate();
    if (config.model == QueueModel::QueueI) {
        return run_impl<ApproachQueueI>(config, &trace);
    }
    return run_impl<ApproachQueueII>(config, &trace);
}

}  // namespace camw
