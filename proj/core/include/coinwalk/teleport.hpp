#pragma once

// Long-distance teleportation: coin 1 carries the payload, coin 2 receives
// it. Evolve with identity coins, measure position and coin 1, correct
// coin 2 per the measured outcome. Branch lists are exhaustive.

#include <cstdint>
#include <functional>
#include <vector>

#include "coinwalk/hilbert.hpp"
#include "coinwalk/linalg.hpp"

namespace coinwalk {

struct TeleportPlan {
    GraphSpec arena = GraphSpec::line();
    std::vector<std::int32_t> coin_dims;
    std::int64_t half_steps = 0; // t: coin 1 and coin 2 each step t times
    Vec coin2_init;

    SubsystemBasis position_basis;
    std::vector<std::int64_t> position_marks; // aligned with position_basis
    SubsystemBasis coin1_basis;
    std::vector<std::int64_t> coin1_marks;

    // (position mark, coin-1 mark) -> correction unitary on coin 2
    std::function<Matrix(std::int64_t, std::int64_t)> correction;
};

struct MeasurementBranch {
    std::int64_t position_outcome = 0; // protocol marking, not raw basis index
    std::int64_t coin1_outcome = 0;
    double probability = 0.0;
    Vec post_coin2;
    Matrix correction;
    Vec corrected;
};

TeleportPlan line_teleport_plan(std::int64_t n);
TeleportPlan cycle_teleport_plan(std::int64_t d);
TeleportPlan complete_teleport_plan(std::int64_t d, std::int64_t t);
TeleportPlan regular_teleport_plan(std::int64_t n, std::int64_t d, std::int64_t t);

// |0> ⊗ input ⊗ coin2_init as a WalkState.
WalkState teleport_initial(const TeleportPlan& plan, const Vec& input);

// Evolves |0> ⊗ input ⊗ coin2_init for 2t alternating identity-coin steps
// and enumerates every (position, coin 1) measurement branch.
std::vector<MeasurementBranch> run_teleport(const TeleportPlan& plan, const Vec& input);

std::vector<MeasurementBranch> teleport_line(std::int64_t n, const Vec& input);
std::vector<MeasurementBranch> teleport_cycle(std::int64_t d, const Vec& input);
std::vector<MeasurementBranch> teleport_complete(std::int64_t d, std::int64_t t, const Vec& input);
std::vector<MeasurementBranch> teleport_regular(std::int64_t n, std::int64_t d, std::int64_t t,
                                                const Vec& input);

// Ascending residues in 1..n coprime to n; size phi(n).
std::vector<std::int64_t> totient_set(std::int64_t n);

// Draws one branch by probability with a seeded deterministic generator.
MeasurementBranch sample_branch(const std::vector<MeasurementBranch>& branches,
                                std::uint64_t seed);

} // namespace coinwalk
