#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace camw {

/// Vehicle movement through the intersection. Right turns share the straight
/// right-of-way and are folded into Straight.
enum class Movement : int { Straight = 0, Left = 1 };

constexpr Movement other(Movement m) {
    return m == Movement::Straight ? Movement::Left : Movement::Straight;
}

constexpr const char* to_string(Movement m) {
    return m == Movement::Straight ? "straight" : "left";
}

/// Incoming approach, named by travel direction. index() is the conventional
/// 1-based queue index.
enum class Approach : int { NS = 0, SN = 1, EW = 2, WE = 3 };

constexpr int index_of(Approach a) { return static_cast<int>(a) + 1; }
constexpr int slot_of(Approach a) { return static_cast<int>(a); }

constexpr std::array<Approach, 4> kAllApproaches = {Approach::NS, Approach::SN,
                                                    Approach::EW, Approach::WE};

constexpr const char* to_string(Approach a) {
    switch (a) {
        case Approach::NS: return "NS";
        case Approach::SN: return "SN";
        case Approach::EW: return "EW";
        case Approach::WE: return "WE";
    }
    return "?";
}

/// One signal phase: a single opposing approach pair gets right-of-way for a
/// single movement. The full mapping lives here so it can be audited in one
/// place:
///   phase 1: NS+SN straight, phase 2: NS+SN left,
///   phase 3: EW+WE straight, phase 4: EW+WE left.
class Phase {
  public:
    explicit constexpr Phase(int id) : id_(id) {
        if (id < 1 || id > 4) throw std::invalid_argument("phase id must be 1..4");
    }

    constexpr int id() const { return id_; }

    constexpr Movement movement() const {
        return (id_ == 1 || id_ == 3) ? Movement::Straight : Movement::Left;
    }

    constexpr std::array<Approach, 2> served_approaches() const {
        return (id_ <= 2) ? std::array<Approach, 2>{Approach::NS, Approach::SN}
                          : std::array<Approach, 2>{Approach::EW, Approach::WE};
    }

    constexpr bool serves(Approach a) const {
        auto pair = served_approaches();
        return pair[0] == a || pair[1] == a;
    }

    constexpr bool serves(Approach a, Movement m) const {
        return serves(a) && movement() == m;
    }

    friend constexpr bool operator==(Phase lhs, Phase rhs) { return lhs.id_ == rhs.id_; }
    friend constexpr bool operator!=(Phase lhs, Phase rhs) { return lhs.id_ != rhs.id_; }

  private:
    int id_;
};

constexpr std::array<Phase, 4> all_phases() {
    return {Phase(1), Phase(2), Phase(3), Phase(4)};
}

/// Returns the phase granting `movement` to the pair containing `approach`.
constexpr Phase phase_serving(Approach approach, Movement movement) {
    const bool ns_pair = (approach == Approach::NS || approach == Approach::SN);
    const int base = ns_pair ? 1 : 3;
    return Phase(base + (movement == Movement::Left ? 1 : 0));
}

struct Vehicle {
    Movement direction = Movement::Straight;  // ground truth, fixed at arrival
    bool communicating = false;               // sampled once at arrival
    long long arrival_slot = 0;
};

/// Single mixed FIFO lane.
class ApproachQueueI {
  public:
    bool empty() const { return lane_.empty(); }
    int size() const { return static_cast<int>(lane_.size()); }

    void push_back(const Vehicle& v) { lane_.push_back(v); }

    const Vehicle& front() const { return lane_.front(); }
    Vehicle pop_front() {
        Vehicle v = lane_.front();
        lane_.pop_front();
        return v;
    }

    const std::deque<Vehicle>& lane() const { return lane_; }

  private:
    std::deque<Vehicle> lane_;
};

/// Two capacity-1 dedicated stop-line slots (left, straight) fed by a shared
/// FIFO lane. A slot only ever holds a vehicle of its own movement, so slot
/// occupancy reveals that vehicle's direction.
class ApproachQueueII {
  public:
    bool slot_occupied(Movement m) const { return slot(m).has_value(); }

    const std::optional<Vehicle>& slot(Movement m) const {
        return m == Movement::Left ? left_slot_ : straight_slot_;
    }

    void fill_slot(const Vehicle& v) {
        auto& s = mutable_slot(v.direction);
        if (s.has_value()) throw std::logic_error("dedicated slot already occupied");
        s = v;
    }

    Vehicle take_slot(Movement m) {
        auto& s = mutable_slot(m);
        if (!s.has_value()) throw std::logic_error("dedicated slot is empty");
        Vehicle v = *s;
        s.reset();
        return v;
    }

    bool shared_empty() const { return shared_.empty(); }
    int shared_size() const { return static_cast<int>(shared_.size()); }
    const std::deque<Vehicle>& shared() const { return shared_; }

    void push_back(const Vehicle& v) { shared_.push_back(v); }

    const Vehicle& shared_front() const { return shared_.front(); }
    Vehicle pop_shared_front() {
        Vehicle v = shared_.front();
        shared_.pop_front();
        return v;
    }

    /// Total queue length: occupied slots plus the shared lane.
    int size() const {
        return shared_size() + (left_slot_ ? 1 : 0) + (straight_slot_ ? 1 : 0);
    }
    bool empty() const { return size() == 0; }

  private:
    std::optional<Vehicle>& mutable_slot(Movement m) {
        return m == Movement::Left ? left_slot_ : straight_slot_;
    }

    std::optional<Vehicle> left_slot_;
    std::optional<Vehicle> straight_slot_;
    std::deque<Vehicle> shared_;
};

/// One communicating vehicle as seen by the controller: 1-based position in
/// its lane and the announced direction.
struct CommEntry {
    int position = 0;
    Movement direction = Movement::Straight;

    friend bool operator==(const CommEntry&, const CommEntry&) = default;
};

/// Dedicated-slot occupancy as sensed by the controller (directions are
/// implied by which slot is occupied).
struct SlotView {
    bool left_occupied = false;
    bool straight_occupied = false;

    friend bool operator==(const SlotView&, const SlotView&) = default;
};

/// Everything the traffic light may observe about one approach. For the
/// two-slot model, positions in `comm` are within the shared lane only and
/// `slots` carries the stop-line occupancy. Ground-truth directions of
/// non-communicating shared/lane vehicles never appear here.
struct CommView {
    Approach approach = Approach::NS;
    int queue_length = 0;
    std::vector<CommEntry> comm;
    std::optional<SlotView> slots;

    /// Shared-lane length for the two-slot model; queue_length for the
    /// single-lane model.
    int lane_length() const {
        if (!slots) return queue_length;
        return queue_length - (slots->left_occupied ? 1 : 0) -
               (slots->straight_occupied ? 1 : 0);
    }

    friend bool operator==(const CommView&, const CommView&) = default;
};

CommView make_comm_view(const ApproachQueueI& queue, Approach approach);
CommView make_comm_view(const ApproachQueueII& queue, Approach approach);

/// Parameters the estimator needs: green duration in slots and the direction
/// prior for non-communicating vehicles (p1 straight, p2 left).
struct EstimatorParams {
    int green_slots = 2;
    double p1 = 0.5;
    double p2 = 0.5;

    double prior(Movement m) const { return m == Movement::Straight ? p1 : p2; }

    void validate() const;
};

enum class QueueModel : int { QueueI = 0, QueueII = 1 };
enum class SchedulerKind : int { Camw = 0, MaxWeight = 1, FixedTime = 2 };
enum class TieBreak : int { LowestPhaseIndex = 0, SeededRandom = 1 };

const char* to_string(QueueModel m);
const char* to_string(SchedulerKind s);
const char* to_string(TieBreak t);

/// Full description of one simulation run. Identical configs (seed included)
/// produce bit-identical traces.
struct SimConfig {
    QueueModel model = QueueModel::QueueI;
    double rho = 1.0;       // per-vehicle communication probability
    double lambda1 = 0.0;   // per-slot straight arrival probability, per approach
    double lambda2 = 0.0;   // per-slot left arrival probability, per approach
    int green_slots = 2;    // n
    long long horizon = 0;  // number of slots to simulate
    std::uint64_t seed = 0;
    SchedulerKind scheduler = SchedulerKind::Camw;
    TieBreak tie_break = TieBreak::LowestPhaseIndex;
    std::optional<std::pair<double, double>> prior_override;

    // When a single-lane approach is learned blocked, also feed the inferred
    // head-of-line direction into the complementary movement's estimate.
    bool hol_inference = true;
    // Two-slot model: allow the shared head to advance into the non-served
    // slot mid-phase (sensitivity variant; default restricts refill of the
    // opposite slot to phase boundaries).
    bool queue2_absorb = false;

    /// Direction prior used by the estimator: the override if given,
    /// otherwise the arrival mixture (lambda1, lambda2) normalized.
    EstimatorParams estimator_params() const;

    void validate() const;  // throws std::invalid_argument with a field message
};

}  // namespace camw
