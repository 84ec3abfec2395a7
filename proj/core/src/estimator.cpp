#include "camw/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace camw {

namespace {

constexpr double kDegeneratePrior = 1e-12;

double powi(double base, int exponent) {
    double result = 1.0;
    for (int i = 0; i < exponent; ++i) result *= base;
    return result;
}

/// Closed form for a lane of `m` vehicles whose communicating ones (at
/// `positions`, strictly increasing, all aligned) are known to match the
/// phase. The lane splits into T+1 blocks separated by the known vehicles;
/// each block contributes the partial geometric sum in algebraic form, with
/// boundary conventions v_0 = 1 and v_{T+1} = m + 1. Blocks that contain no
/// unknown vehicle contribute exactly zero through the same expression.
double closed_form_all_aligned(int m, const std::vector<int>& positions, double pa) {
    if (m == 0) return 0.0;
    const double pb = 1.0 - pa;
    const int t = static_cast<int>(positions.size());
    double expectation = m * powi(pa, m - t);
    for (int l = 0; l <= t; ++l) {
        const int v_l = (l == 0) ? 1 : positions[l - 1];
        const int v_next = (l == t) ? m + 1 : positions[l];
        const double term_a = (pa + pb * v_l) * powi(pa, v_l - l) / pb;
        const double term_b =
            (1.0 - 2.0 * pa - pb * v_next) * powi(pa, v_next - l - 1) / pb;
        expectation += term_a + term_b;
    }
    return expectation;
}

}  // namespace

void AlignmentView::validate() const {
    if (horizon < 0) throw std::invalid_argument("alignment view: negative horizon");
    if (!(p_aligned >= 0.0 && p_aligned <= 1.0) || !std::isfinite(p_aligned))
        throw std::invalid_argument("alignment view: p_aligned must be in [0, 1]");
    int previous = 0;
    for (const AlignedComm& entry : comm) {
        if (entry.position <= previous)
            throw std::invalid_argument(
                "alignment view: positions must be strictly increasing");
        if (entry.position > horizon)
            throw std::invalid_argument(
                "alignment view: position beyond horizon");
        previous = entry.position;
    }
}

PassCountDistribution::PassCountDistribution(std::vector<double> probabilities)
    : probs_(std::move(probabilities)) {
    if (probs_.empty())
        throw std::invalid_argument("distribution needs at least P[J=0]");
}

double PassCountDistribution::mean() const {
    double m = 0.0;
    for (int j = 1; j < static_cast<int>(probs_.size()); ++j) m += j * probs_[j];
    return m;
}

double PassCountDistribution::total() const {
    double s = 0.0;
    for (double p : probs_) s += p;
    return s;
}

AlignmentView truncate_at_first_misaligned(const AlignmentView& view) {
    view.validate();
    AlignmentView out;
    out.p_aligned = view.p_aligned;
    out.horizon = view.horizon;
    for (const AlignedComm& entry : view.comm) {
        if (!entry.aligned) {
            out.horizon = entry.position - 1;
            break;
        }
        out.comm.push_back(entry);
    }
    return out;
}

PassCountDistribution pass_count_distribution(const AlignmentView& view) {
    view.validate();
    for (const AlignedComm& entry : view.comm)
        if (!entry.aligned)
            throw std::invalid_argument(
                "pass_count_distribution: misaligned entry; truncate first");

    const int m = view.horizon;
    const double pa = view.p_aligned;
    const double pb = 1.0 - pa;
    const int t = static_cast<int>(view.comm.size());

    std::vector<double> probs(m + 1, 0.0);
    int known_before = 0;  // communicating vehicles at positions <= j
    for (int j = 0; j < m; ++j) {
        while (known_before < t && view.comm[known_before].position <= j)
            ++known_before;
        const bool next_is_known =
            known_before < t && view.comm[known_before].position == j + 1;
        probs[j] = next_is_known ? 0.0 : powi(pa, j - known_before) * pb;
    }
    probs[m] = powi(pa, m - t);
    return PassCountDistribution(std::move(probs));
}

double expected_pass_queue1(const AlignmentView& view) {
    const AlignmentView truncated = truncate_at_first_misaligned(view);
    if (truncated.horizon == 0) return 0.0;

    const double pa = truncated.p_aligned;
    const double pb = 1.0 - pa;
    if (pa < kDegeneratePrior || pb < kDegeneratePrior)
        return pass_count_distribution(truncated).mean();

    std::vector<int> positions;
    positions.reserve(truncated.comm.size());
    for (const AlignedComm& entry : truncated.comm) positions.push_back(entry.position);
    return closed_form_all_aligned(truncated.horizon, positions, pa);
}

double expected_pass_queue2(const SlotView& slots, Movement serving,
                            const AlignmentView& shared, int green_slots) {
    shared.validate();
    if (green_slots < 1)
        throw std::invalid_argument("expected_pass_queue2: green_slots must be >= 1");

    const bool serving_occupied =
        serving == Movement::Left ? slots.left_occupied : slots.straight_occupied;
    const bool other_occupied =
        serving == Movement::Left ? slots.straight_occupied : slots.left_occupied;
    const int shared_len = shared.horizon;

    if (!serving_occupied && !other_occupied && shared_len > 0)
        throw std::invalid_argument(
            "expected_pass_queue2: empty slots with a non-empty shared lane "
            "contradict boundary refill");
    if (!serving_occupied) return 0.0;

    const int guaranteed = (other_occupied || shared_len == 0) ? 1 : 2;

    AlignmentView sub;
    sub.p_aligned = shared.p_aligned;
    if (guaranteed == 1) {
        sub.horizon = std::min(green_slots - 1, shared_len);
        for (const AlignedComm& entry : shared.comm) {
            if (entry.position > sub.horizon) break;
            sub.comm.push_back(entry);
        }
    } else {
        // The shared head is one of the two guaranteed departures (it must
        // match the served movement, or it would have refilled the other
        // slot). The sub-queue starts behind it.
        sub.horizon = std::max(0, std::min(green_slots - 2, shared_len - 1));
        for (const AlignedComm& entry : shared.comm) {
            if (entry.position == 1 && !entry.aligned)
                throw std::invalid_argument(
                    "expected_pass_queue2: shared head announces a direction "
                    "inconsistent with the empty slot");
            if (entry.position == 1) continue;
            if (entry.position - 1 > sub.horizon) break;
            sub.comm.push_back({entry.position - 1, entry.aligned});
        }
    }
    return std::min(guaranteed, green_slots) + expected_pass_queue1(sub);
}

double enumerate_expected_pass(const AlignmentView& view) {
    view.validate();
    const int m = view.horizon;
    if (m > 20)
        throw std::invalid_argument("enumerate_expected_pass: horizon too large");
    if (m == 0) return 0.0;

    // Position -> known alignment (-1 unknown, 0 misaligned, 1 aligned).
    std::vector<int> known(m + 1, -1);
    for (const AlignedComm& entry : view.comm)
        known[entry.position] = entry.aligned ? 1 : 0;
    std::vector<int> unknown;
    for (int pos = 1; pos <= m; ++pos)
        if (known[pos] < 0) unknown.push_back(pos);

    const double pa = view.p_aligned;
    const double pb = 1.0 - pa;
    const std::size_t cases = std::size_t{1} << unknown.size();

    double expectation = 0.0;
    std::vector<int> aligned(m + 1, 0);
    for (int pos = 1; pos <= m; ++pos) aligned[pos] = known[pos];
    for (std::size_t mask = 0; mask < cases; ++mask) {
        double weight = 1.0;
        for (std::size_t bit = 0; bit < unknown.size(); ++bit) {
            const bool is_aligned = (mask >> bit) & 1u;
            aligned[unknown[bit]] = is_aligned ? 1 : 0;
            weight *= is_aligned ? pa : pb;
        }
        int passes = 0;
        while (passes < m && aligned[passes + 1] == 1) ++passes;
        expectation += weight * passes;
    }
    return expectation;
}

AlignmentView single_lane_alignment(const CommView& view, Movement serving,
                                    const EstimatorParams& params) {
    AlignmentView out;
    out.horizon = std::min(params.green_slots, view.queue_length);
    out.p_aligned = params.prior(serving);
    for (const CommEntry& entry : view.comm) {
        if (entry.position > out.horizon) break;
        out.comm.push_back({entry.position, entry.direction == serving});
    }
    return out;
}

AlignmentView shared_lane_alignment(const CommView& view, Movement serving,
                                    const EstimatorParams& params) {
    if (!view.slots)
        throw std::invalid_argument("shared_lane_alignment: view has no slot info");
    AlignmentView out;
    out.horizon = view.lane_length();
    out.p_aligned = params.prior(serving);
    for (const CommEntry& entry : view.comm)
        out.comm.push_back({entry.position, entry.direction == serving});
    return out;
}

}  // namespace camw
