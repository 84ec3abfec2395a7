#include "camw/domain.hpp"

#include <cmath>

namespace camw {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

bool is_probability(double x) { return x >= 0.0 && x <= 1.0 && std::isfinite(x); }

}  // namespace

CommView make_comm_view(const ApproachQueueI& queue, Approach approach) {
    CommView view;
    view.approach = approach;
    view.queue_length = queue.size();
    int position = 0;
    for (const Vehicle& v : queue.lane()) {
        ++position;
        if (v.communicating) view.comm.push_back({position, v.direction});
    }
    return view;
}

CommView make_comm_view(const ApproachQueueII& queue, Approach approach) {
    CommView view;
    view.approach = approach;
    view.queue_length = queue.size();
    view.slots = SlotView{queue.slot_occupied(Movement::Left),
                          queue.slot_occupied(Movement::Straight)};
    int position = 0;
    for (const Vehicle& v : queue.shared()) {
        ++position;
        if (v.communicating) view.comm.push_back({position, v.direction});
    }
    return view;
}

void EstimatorParams::validate() const {
    require(green_slots >= 1, "green_slots must be at least 1");
    require(is_probability(p1), "p1 must be in [0, 1]");
    require(is_probability(p2), "p2 must be in [0, 1]");
    require(std::abs(p1 + p2 - 1.0) <= 1e-9, "p1 + p2 must equal 1");
}

const char* to_string(QueueModel m) {
    return m == QueueModel::QueueI ? "queue1" : "queue2";
}

const char* to_string(SchedulerKind s) {
    switch (s) {
        case SchedulerKind::Camw: return "camw";
        case SchedulerKind::MaxWeight: return "maxweight";
        case SchedulerKind::FixedTime: return "fixed";
    }
    return "?";
}

const char* to_string(TieBreak t) {
    return t == TieBreak::LowestPhaseIndex ? "lowest" : "random";
}

EstimatorParams SimConfig::estimator_params() const {
    EstimatorParams params;
    params.green_slots = green_slots;
    if (prior_override) {
        params.p1 = prior_override->first;
        params.p2 = prior_override->second;
    } else if (lambda1 + lambda2 > 0.0) {
        params.p1 = lambda1 / (lambda1 + lambda2);
        params.p2 = lambda2 / (lambda1 + lambda2);
    }
    return params;
}

void SimConfig::validate() const {
    require(is_probability(rho), "rho must be in [0, 1]");
    require(is_probability(lambda1), "lambda1 must be in [0, 1]");
    require(is_probability(lambda2), "lambda2 must be in [0, 1]");
    require(lambda1 + lambda2 <= 1.0 + 1e-12, "lambda1+lambda2 exceeds 1");
    require(green_slots >= 1, "green_slots (n) must be at least 1");
    require(horizon >= 0, "horizon must be non-negative");
    if (prior_override) {
        require(is_probability(prior_override->first), "prior p1 must be in [0, 1]");
        require(is_probability(prior_override->second), "prior p2 must be in [0, 1]");
        require(std::abs(prior_override->first + prior_override->second - 1.0) <= 1e-9,
                "prior p1 + p2 must equal 1");
    }
    estimator_params().validate();
}

}  // namespace camw
