#include "camw/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "camw/domain.hpp"
#include "camw/estimator.hpp"
#include "camw/simulator.hpp"

namespace camw {

namespace {

constexpr double kOracleTol = 1e-9;
constexpr double kDistributionTol = 1e-12;

// Interior points cover the generic algebra; the endpoints exercise the
// degenerate-prior path.
constexpr std::array<double, 7> kPriorGrid = {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};

std::string fmt4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

class Timer {
  public:
    double elapsed_ms() const {
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(now - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

long long pow3(int k) {
    long long out = 1;
    for (int i = 0; i < k; ++i) out *= 3;
    return out;
}

// Digit encoding for one lane position: 0 unknown, 1 communicating aligned,
// 2 communicating misaligned.
AlignmentView lane_pattern(int horizon, long long code, double p_aligned) {
    AlignmentView view;
    view.horizon = horizon;
    view.p_aligned = p_aligned;
    for (int pos = 1; pos <= horizon; ++pos) {
        const int digit = static_cast<int>(code % 3);
        code /= 3;
        if (digit == 1) view.comm.push_back({pos, true});
        if (digit == 2) view.comm.push_back({pos, false});
    }
    return view;
}

void record_failure(VerifyResult& result, const std::string& detail) {
    result.pass = false;
    if (result.detail.empty()) result.detail = detail;
}

}  // namespace

VerifyResult verify_single_lane_closed_form() {
    Timer timer;
    VerifyResult result;
    result.name = "single-lane closed form vs enumeration";
    result.pass = true;

    for (int m = 1; m <= 8; ++m) {
        const long long codes = pow3(m);
        for (long long code = 0; code < codes; ++code) {
            for (double p : kPriorGrid) {
                const AlignmentView view = lane_pattern(m, code, p);
                const double closed = expected_pass_queue1(view);
                const double oracle = enumerate_expected_pass(view);
                const double err = std::abs(closed - oracle);
                result.worst_error = std::max(result.worst_error, err);
                ++result.cases;
                if (err > kOracleTol) {
                    record_failure(result, "m=" + std::to_string(m) + " pattern=" +
                                               std::to_string(code) + " p=" +
                                               fmt4(p) + " closed=" + fmt4(closed) +
                                               " oracle=" + fmt4(oracle));
                }
            }
        }
    }
    result.elapsed_ms = timer.elapsed_ms();
    return result;
}

namespace {

// Digit encoding for one shared-lane position: 0 unknown, 1 communicating
// straight, 2 communicating left.
struct SharedPattern {
    // Movement per position when communicated; nullopt when unknown.
    std::vector<std::optional<Movement>> announced;
};

SharedPattern shared_pattern(int length, long long code) {
    SharedPattern p;
    p.announced.resize(length);
    for (int i = 0; i < length; ++i) {
        const int digit = static_cast<int>(code % 3);
        code /= 3;
        if (digit == 1) p.announced[i] = Movement::Straight;
        if (digit == 2) p.announced[i] = Movement::Left;
    }
    return p;
}

// Brute-force expectation for the two-slot model: enumerate every direction
// assignment of the unknown shared vehicles (respecting the refill-discipline
// constraint on the head) and replay the restricted mid-phase dynamics.
double two_slot_oracle(bool serving_occupied, bool other_occupied,
                       Movement serving, const SharedPattern& pattern,
                       std::optional<Movement> forced_head, double p_serving,
                       int green_slots) {
    const int length = static_cast<int>(pattern.announced.size());
    std::vector<int> free_positions;  // 0-based, direction to be enumerated
    std::vector<Movement> directions(length, serving);
    for (int i = 0; i < length; ++i) {
        if (pattern.announced[i]) {
            directions[i] = *pattern.announced[i];
        } else if (i == 0 && forced_head) {
            directions[i] = *forced_head;
        } else {
            free_positions.push_back(i);
        }
    }

    double expectation = 0.0;
    const long long assignments = 1LL << free_positions.size();
    for (long long mask = 0; mask < assignments; ++mask) {
        double weight = 1.0;
        for (std::size_t b = 0; b < free_positions.size(); ++b) {
            const bool aligned = (mask >> b) & 1;
            directions[free_positions[b]] = aligned ? serving : other(serving);
            weight *= aligned ? p_serving : 1.0 - p_serving;
        }
        if (weight == 0.0) continue;

        ApproachQueueII queue;
        if (serving_occupied) queue.fill_slot(Vehicle{serving, false, 0});
        if (other_occupied) queue.fill_slot(Vehicle{other(serving), false, 0});
        for (int i = 0; i < length; ++i) {
            queue.push_back(Vehicle{directions[i], false, 0});
        }

        int departures = 0;
        for (int s = 0; s < green_slots; ++s) {
            if (serve_slot(queue, serving, false)) ++departures;
        }
        expectation += weight * departures;
    }
    return expectation;
}

}  // namespace

VerifyResult verify_two_slot_closed_form() {
    Timer timer;
    VerifyResult result;
    result.name = "two-slot closed form vs dynamics oracle";
    result.pass = true;

    constexpr std::array<int, 6> kGreens = {1, 2, 3, 4, 5, 8};
    constexpr std::array<Movement, 2> kServing = {Movement::Straight,
                                                  Movement::Left};

    for (int n : kGreens) {
        for (Movement serving : kServing) {
            for (int serving_occ = 0; serving_occ <= 1; ++serving_occ) {
                for (int other_occ = 0; other_occ <= 1; ++other_occ) {
                    for (int length = 0; length <= 5; ++length) {
                        // Both slots empty with a backlog behind them cannot
                        // survive a boundary refill.
                        if (!serving_occ && !other_occ && length > 0) continue;

                        std::optional<Movement> forced_head;
                        if (length > 0 && serving_occ != other_occ) {
                            // A vehicle matching the empty slot would have
                            // refilled it, so the head must match the
                            // occupied one.
                            forced_head = serving_occ ? serving : other(serving);
                        }

                        const long long codes = pow3(length);
                        for (long long code = 0; code < codes; ++code) {
                            const SharedPattern pattern =
                                shared_pattern(length, code);
                            if (forced_head && pattern.announced[0] &&
                                *pattern.announced[0] != *forced_head) {
                                continue;  // state unreachable
                            }

                            for (double p : kPriorGrid) {
                                AlignmentView shared;
                                shared.horizon = length;
                                shared.p_aligned = p;
                                for (int i = 0; i < length; ++i) {
                                    if (pattern.announced[i]) {
                                        shared.comm.push_back(
                                            {i + 1,
                                             *pattern.announced[i] == serving});
                                    }
                                }
                                const SlotView slots{
                                    (serving == Movement::Left ? serving_occ
                                                               : other_occ) != 0,
                                    (serving == Movement::Straight
                                         ? serving_occ
                                         : other_occ) != 0};

                                const double closed = expected_pass_queue2(
                                    slots, serving, shared, n);
                                const double oracle = two_slot_oracle(
                                    serving_occ != 0, other_occ != 0, serving,
                                    pattern, forced_head, p, n);
                                const double err = std::abs(closed - oracle);
                                result.worst_error =
                                    std::max(result.worst_error, err);
                                ++result.cases;
                                if (err > kOracleTol) {
                                    record_failure(
                                        result,
                                        "n=" + std::to_string(n) + " serving=" +
                                            to_string(serving) + " slots=" +
                                            std::to_string(serving_occ) +
                                            std::to_string(other_occ) +
                                            " len=" + std::to_string(length) +
                                            " pattern=" + std::to_string(code) +
                                            " p=" + fmt4(p) + " closed=" +
                                            fmt4(closed) + " oracle=" +
                                            fmt4(oracle));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    result.elapsed_ms = timer.elapsed_ms();
    return result;
}

VerifyResult verify_pass_distributions() {
    Timer timer;
    VerifyResult result;
    result.name = "pass-count distribution sanity";
    result.pass = true;

    for (int m = 1; m <= 8; ++m) {
        // All-aligned patterns only: digit per position, 0 unknown, 1 known
        // aligned.
        for (long long code = 0; code < (1LL << m); ++code) {
            for (double p : kPriorGrid) {
                AlignmentView view;
                view.horizon = m;
                view.p_aligned = p;
                for (int pos = 1; pos <= m; ++pos) {
                    if ((code >> (pos - 1)) & 1) view.comm.push_back({pos, true});
                }

                const PassCountDistribution dist = pass_count_distribution(view);
                const std::string where =
                    "m=" + std::to_string(m) + " pattern=" + std::to_string(code) +
                    " p=" + fmt4(p);
                ++result.cases;

                for (int j = 0; j <= dist.max_count(); ++j) {
                    if (dist.probability(j) < 0.0) {
                        record_failure(result, where + ": negative P[J=" +
                                                   std::to_string(j) + "]");
                    }
                }
                const double mass_err = std::abs(dist.total() - 1.0);
                result.worst_error = std::max(result.worst_error, mass_err);
                if (mass_err > kDistributionTol) {
                    record_failure(result,
                                   where + ": total mass " + fmt4(dist.total()));
                }
                for (const AlignedComm& entry : view.comm) {
                    if (dist.probability(entry.position - 1) != 0.0) {
                        record_failure(
                            result, where + ": P[J=" +
                                        std::to_string(entry.position - 1) +
                                        "] not structurally zero");
                    }
                }
                const double mean_err =
                    std::abs(dist.mean() - expected_pass_queue1(view));
                result.worst_error = std::max(result.worst_error, mean_err);
                if (mean_err > kDistributionTol) {
                    record_failure(result, where + ": mean " + fmt4(dist.mean()) +
                                               " vs closed form " +
                                               fmt4(expected_pass_queue1(view)));
                }
            }
        }
    }
    result.elapsed_ms = timer.elapsed_ms();
    return result;
}

std::vector<VerifyResult> run_verification() {
    return {verify_single_lane_closed_form(), verify_two_slot_closed_form(),
            verify_pass_distributions()};
}

}  // namespace camw
