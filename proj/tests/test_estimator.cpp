#include <cmath>
#include <vector>

#include "camw/estimator.hpp"
#include "doctest.h"

using namespace camw;

namespace {

AlignmentView view_of(int horizon, std::vector<AlignedComm> comm, double p) {
    return AlignmentView{horizon, std::move(comm), p};
}

}  // namespace

TEST_CASE("two unknown vehicles: the four outcomes by hand") {
    // p=0.6: blocked head 0.4; head passes, second blocks 0.6*0.4; both pass 0.36.
    auto dist = pass_count_distribution(view_of(2, {}, 0.6));
    REQUIRE(dist.max_count() == 2);
    CHECK(dist.probability(0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(dist.probability(1) == doctest::Approx(0.24).epsilon(1e-12));
    CHECK(dist.probability(2) == doctest::Approx(0.36).epsilon(1e-12));

    CHECK(expected_pass_queue1(view_of(2, {}, 0.6)) == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(enumerate_expected_pass(view_of(2, {}, 0.6)) == doctest::Approx(0.96).epsilon(1e-12));
}

TEST_CASE("a known-aligned head always departs") {
    auto dist = pass_count_distribution(view_of(1, {{1, true}}, 0.3));
    CHECK(dist.probability(0) == 0.0);
    CHECK(dist.probability(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("counts just short of a known-aligned vehicle are impossible") {
    auto dist = pass_count_distribution(view_of(4, {{1, true}, {3, true}}, 0.5));
    CHECK(dist.probability(0) == 0.0);  // position 1 is known to pass
    CHECK(dist.probability(2) == 0.0);  // stopping right before position 3
    CHECK(dist.probability(1) > 0.0);
    CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distributions normalize and their means match the closed form") {
    for (int m = 1; m <= 6; ++m) {
        for (double p : {0.0, 0.1, 0.5, 0.9, 1.0}) {
            for (int pattern = 0; pattern < (1 << m); ++pattern) {
                std::vector<AlignedComm> comm;
                for (int pos = 1; pos <= m; ++pos)
                    if (pattern & (1 << (pos - 1))) comm.push_back({pos, true});
                auto view = view_of(m, comm, p);
                auto dist = pass_count_distribution(view);
                CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));
                for (double prob : dist.probabilities()) CHECK(prob >= 0.0);
                CHECK(dist.mean() ==
                      doctest::Approx(expected_pass_queue1(view)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("worked single-lane expectations") {
    // Known-aligned at 2: outcomes over positions 1 and 3.
    CHECK(expected_pass_queue1(view_of(3, {{2, true}}, 0.5)) ==
          doctest::Approx(1.25).epsilon(1e-12));
    // A misaligned head blocks everything.
    CHECK(expected_pass_queue1(view_of(3, {{1, false}}, 0.9)) == 0.0);
    // Fully announced, fully aligned lanes empty out.
    for (int m = 1; m <= 5; ++m) {
        std::vector<AlignedComm> comm;
        for (int pos = 1; pos <= m; ++pos) comm.push_back({pos, true});
        CHECK(expected_pass_queue1(view_of(m, comm, 0.2)) == doctest::Approx(m));
    }
    // Vacuous horizon.
    CHECK(expected_pass_queue1(view_of(0, {}, 0.5)) == 0.0);
}

TEST_CASE("oracle basics") {
    CHECK(enumerate_expected_pass(view_of(1, {}, 0.7)) == doctest::Approx(0.7));
    CHECK(enumerate_expected_pass(view_of(2, {{1, false}}, 0.7)) == 0.0);
}

TEST_CASE("everything past the first misaligned vehicle is irrelevant") {
    auto truncated = truncate_at_first_misaligned(
        view_of(6, {{2, true}, {4, false}, {5, true}}, 0.3));
    CHECK(truncated.horizon == 3);
    REQUIRE(truncated.comm.size() == 1);
    CHECK(truncated.comm[0] == AlignedComm{2, true});

    double with_tail = expected_pass_queue1(view_of(6, {{4, false}, {6, true}}, 0.3));
    double bare = expected_pass_queue1(view_of(3, {}, 0.3));
    CHECK(with_tail == doctest::Approx(bare).epsilon(1e-12));
}

TEST_CASE("expectation stays inside the horizon and grows with the prior") {
    for (int m = 1; m <= 5; ++m) {
        double prev = -1.0;
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double e = expected_pass_queue1(view_of(m, {}, p));
            CHECK(e >= 0.0);
            CHECK(e <= m);
            CHECK(e > prev);
            prev = e;
        }
    }
}

TEST_CASE("degenerate priors take the limit, not 0/0") {
    CHECK(expected_pass_queue1(view_of(4, {}, 0.0)) == doctest::Approx(0.0));
    CHECK(expected_pass_queue1(view_of(4, {}, 1.0)) == doctest::Approx(4.0));
    CHECK(std::isfinite(expected_pass_queue1(view_of(5, {{3, true}}, 1.0))));
    CHECK(expected_pass_queue1(view_of(5, {{3, true}}, 0.0)) == 0.0);
}

TEST_CASE("two-slot expectations by configuration") {
    const SlotView both{true, true};
    const SlotView left_only{true, false};
    const SlotView straight_only{false, true};
    const SlotView neither{false, false};

    SUBCASE("both slots filled, one unknown behind: 1 + p") {
        double e = expected_pass_queue2(both, Movement::Straight,
                                        view_of(1, {}, 0.5), 2);
        CHECK(e == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("serving the empty slot reaches nothing") {
        CHECK(expected_pass_queue2(left_only, Movement::Straight,
                                   view_of(1, {}, 0.5), 2) == 0.0);
        CHECK(expected_pass_queue2(neither, Movement::Left, view_of(0, {}, 0.5), 2) ==
              0.0);
    }
    SUBCASE("one slot empty with backlog: the head provably matches the other") {
        CHECK(expected_pass_queue2(left_only, Movement::Left, view_of(1, {}, 0.5), 2) ==
              doctest::Approx(2.0));
        CHECK(expected_pass_queue2(straight_only, Movement::Straight,
                                   view_of(1, {}, 0.5), 2) == doctest::Approx(2.0));
    }
    SUBCASE("guaranteed pair plus sub-queue tail") {
        double e = expected_pass_queue2(left_only, Movement::Left,
                                        view_of(2, {}, 0.5), 3);
        CHECK(e == doctest::Approx(2.5).epsilon(1e-12));
    }
    SUBCASE("a lone slot vehicle with empty shared lane") {
        CHECK(expected_pass_queue2(left_only, Movement::Left, view_of(0, {}, 0.5), 2) ==
              doctest::Approx(1.0));
    }
    SUBCASE("one-slot green serves exactly the slot") {
        CHECK(expected_pass_queue2(left_only, Movement::Left, view_of(3, {}, 0.5), 1) ==
              doctest::Approx(1.0));
    }
    SUBCASE("results never exceed the green duration") {
        for (int n = 1; n <= 5; ++n) {
            double e = expected_pass_queue2(both, Movement::Left, view_of(4, {}, 0.9), n);
            CHECK(e <= n);
            CHECK(e >= 0.0);
        }
    }
}

TEST_CASE("lane views feed the estimator with serving-relative alignment") {
    CommView cv;
    cv.approach = Approach::NS;
    cv.queue_length = 5;
    cv.comm = {{1, Movement::Straight}, {3, Movement::Left}, {5, Movement::Straight}};

    EstimatorParams params{3, 0.6, 0.4};

    AlignmentView straight = single_lane_alignment(cv, Movement::Straight, params);
    CHECK(straight.horizon == 3);  // min(n, Q); the entry at 5 is discarded
    CHECK(straight.p_aligned == doctest::Approx(0.6));
    REQUIRE(straight.comm.size() == 2);
    CHECK(straight.comm[0] == AlignedComm{1, true});
    CHECK(straight.comm[1] == AlignedComm{3, false});

    AlignmentView left = single_lane_alignment(cv, Movement::Left, params);
    CHECK(left.p_aligned == doctest::Approx(0.4));
    CHECK(left.comm[0] == AlignedComm{1, false});
    CHECK(left.comm[1] == AlignedComm{3, true});

    SUBCASE("short queues truncate the horizon") {
        cv.queue_length = 2;
        cv.comm = {{1, Movement::Straight}};
        CHECK(single_lane_alignment(cv, Movement::Straight, params).horizon == 2);
    }
}

TEST_CASE("shared-lane views span the whole backlog") {
    CommView cv;
    cv.approach = Approach::EW;
    cv.queue_length = 4;
    cv.slots = SlotView{true, true};
    cv.comm = {{2, Movement::Left}};

    EstimatorParams params{2, 0.6, 0.4};
    AlignmentView shared = shared_lane_alignment(cv, Movement::Left, params);
    CHECK(shared.horizon == 2);  // two vehicles behind the slots
    CHECK(shared.p_aligned == doctest::Approx(0.4));
    REQUIRE(shared.comm.size() == 1);
    CHECK(shared.comm[0] == AlignedComm{2, true});
}
