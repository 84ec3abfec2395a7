#pragma once

#include <string>
#include <vector>

namespace camw {

struct VerifyResult {
    std::string name;
    bool pass = false;
    long long cases = 0;
    double worst_error = 0.0;
    double elapsed_ms = 0.0;
    std::string detail;  // first failing case, empty when clean
};

/// Sweeps every communicating-pattern/alignment combination for lane horizons
/// 1..8 over a prior grid and compares the closed-form expectation against
/// the exhaustive enumeration oracle (tolerance 1e-9).
VerifyResult verify_single_lane_closed_form();

/// Sweeps every reachable two-slot configuration (slot occupancies, serving
/// movement, shared-lane communication patterns up to length 5, green
/// durations up to 8) and compares the closed form against a brute-force
/// oracle that enumerates hidden directions and replays the slot dynamics.
VerifyResult verify_two_slot_closed_form();

/// Checks every all-aligned pass-count distribution for non-negativity, unit
/// mass (1e-12), structural zeros just short of each known-aligned position,
/// and agreement between the distribution mean and the closed form (1e-12).
VerifyResult verify_pass_distributions();

std::vector<VerifyResult> run_verification();

}  // namespace camw
