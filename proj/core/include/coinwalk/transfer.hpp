#pragma once

// Perfect-state-transfer schedules on the four arenas: which coin gets a
// flip at which step, plus the recovery unitaries that restore the payload
// at the target position.

#include <cstdint>
#include <string>
#include <vector>

#include "coinwalk/operators.hpp"

namespace coinwalk {

enum class CaseTag {
    L1_1,      // line, x > 0 even
    L1_2,      // line, x > 0 odd
    L1_3,      // line, x < 0 even
    L1_4,      // line, x < 0 odd
    C_M1,      // cycle, both branches clockwise (line schedule reused)
    C_M2_even, // cycle, both anticlockwise, d-x even
    C_M2_odd,  // cycle, both anticlockwise, d-x odd
    C_M3_even, // cycle, split directions, x even
    C_M3_odd,  // cycle, split directions, x odd
    C_M4,      // cycle, split directions mirrored
    KD_complete,
    KD_regular,
};

std::string case_tag_name(CaseTag tag);

struct TransferPlan {
    GraphSpec arena = GraphSpec::line();
    std::int64_t start = 0;
    std::int64_t target = 0;
    std::vector<StepSpec> steps; // 1-based step i = steps[i-1]
    CoinOp recovery_coin1 = CoinOp::identity(2);
    CoinOp recovery_coin2 = CoinOp::identity(2);
    CaseTag tag = CaseTag::L1_1;

    std::vector<std::int32_t> coin_dims() const;
    std::size_t step_count() const { return steps.size(); }

    // (1-based step, coin register, op) for each non-identity coin op
    std::vector<std::tuple<std::size_t, int, CoinOp>> nonidentity_placements() const;
};

struct TransferReport {
    TransferPlan plan;
    std::vector<WalkState> trace; // trace[i] = state after step i; trace[0] = initial
    WalkState final_state;
    WalkState corrected;
    WalkState target_state;
    double fidelity = 0.0;
    bool pass = false;
};

// Line transfer to x != 0 (Cases 1.1-1.4).
TransferPlan plan_line(std::int64_t x);

// Cycle transfer to x in 1..d-1 using one of the four routing methods.
// Methods 3 and 4 require an even vertex count.
TransferPlan plan_cycle(std::int64_t d, std::int64_t x, int method);

// Qudit transfer on the looped complete graph, 2d steps.
TransferPlan plan_complete(std::int64_t d, std::int64_t x);

// Qudit transfer on the circulant d-regular graph with n vertices, 2n steps.
TransferPlan plan_regular(std::int64_t n, std::int64_t d, std::int64_t x);

// All-identity schedule that returns the walker to position 0 with the coin
// state intact (complete/circulant arenas).
TransferPlan revival_plan(const GraphSpec& arena);

TransferReport run_transfer(const TransferPlan& plan, const Vec& input_coin1);

// Runs the x-target schedule and then the (-x)-target schedule with no
// recovery and reports fidelity against the revival state. The walker and
// coin 1 return exactly; the return leg flips coin 2 once, so the revival
// state carries coin 2 = |1>.
double periodicity_check(std::int64_t x, const Vec& input_coin1);

// Same plan started from position l (line only); targets shift with l.
TransferReport route_from(std::int64_t l, const TransferPlan& plan, const Vec& input_coin1);

} // namespace coinwalk
