#include "coinwalk/transfer.hpp"

#include <cmath>
#include <cstdlib>

namespace coinwalk {

std::string case_tag_name(CaseTag tag) {
    switch (tag) {
        case CaseTag::L1_1: return "L1_1";
        case CaseTag::L1_2: return "L1_2";
        case CaseTag::L1_3: return "L1_3";
        case CaseTag::L1_4: return "L1_4";
        case CaseTag::C_M1: return "C_M1";
        case CaseTag::C_M2_even: return "C_M2_even";
        case CaseTag::C_M2_odd: return "C_M2_odd";
        case CaseTag::C_M3_even: return "C_M3_even";
        case CaseTag::C_M3_odd: return "C_M3_odd";
        case CaseTag::C_M4: return "C_M4";
        case CaseTag::KD_complete: return "KD_complete";
        case CaseTag::KD_regular: return "KD_regular";
    }
    return "?";
}

std::vector<std::int32_t> TransferPlan::coin_dims() const {
    const std::int32_t d = static_cast<std::int32_t>(arena.degree());
    return {d, d};
}

std::vector<std::tuple<std::size_t, int, CoinOp>> TransferPlan::nonidentity_placements() const {
    std::vector<std::tuple<std::size_t, int, CoinOp>> out;
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (!steps[i].coin_op.is_identity()) out.emplace_back(i + 1, steps[i].active_coin, steps[i].coin_op);
    return out;
}

namespace {

// Alternating schedule: odd steps act on coin 1 (index 0), even on coin 2
// (index 1). `flips` lists (1-based step, coin op) replacements.
std::vector<StepSpec> alternating_steps(const GraphSpec& arena, std::size_t count,
                                        const std::vector<std::pair<std::size_t, CoinOp>>& flips) {
    const int dim = static_cast<int>(arena.degree());
    std::vector<StepSpec> steps;
    steps.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        const int active = (i % 2 == 1) ? 0 : 1;
        CoinOp op = CoinOp::identity(dim);
        for (const auto& [at, replacement] : flips)
            if (at == i) op = replacement;
        steps.push_back(make_step(arena, active, op));
    }
    return steps;
}

} // namespace

TransferPlan plan_line(std::int64_t x) {
    if (x == 0) throw TargetError("line transfer target must be nonzero");
    const GraphSpec arena = GraphSpec::line();
    const std::int64_t ax = std::llabs(x);
    const bool even = ax % 2 == 0;
    TransferPlan plan;
    plan.arena = arena;
    plan.target = x;
    plan.recovery_coin1 = CoinOp::pauli_x();
    if (x > 0) {
        plan.tag = even ? CaseTag::L1_1 : CaseTag::L1_2;
        plan.recovery_coin2 = CoinOp::identity(2);
        const std::size_t count = even ? 2 * ax : 2 * ax + 1;
        const std::size_t flip_at = even ? ax + 1 : ax + 2;
        plan.steps = alternating_steps(arena, count, {{flip_at, CoinOp::pauli_x()}});
    } else {
        plan.tag = even ? CaseTag::L1_3 : CaseTag::L1_4;
        plan.recovery_coin2 = CoinOp::pauli_x();
        const std::size_t count = even ? 2 * ax : 2 * ax + 1;
        const std::size_t flip_at = even ? ax + 1 : ax + 2;
        plan.steps = alternating_steps(arena, count,
                                       {{2, CoinOp::pauli_x()}, {flip_at, CoinOp::pauli_x()}});
    }
    return plan;
}

TransferPlan plan_cycle(std::int64_t d, std::int64_t x, int method) {
    const GraphSpec arena = GraphSpec::cycle(d);
    if (x <= 0 || x >= d)
        throw TargetError("cycle transfer target must lie in 1.." + std::to_string(d - 1));
    if (method < 1 || method > 4) throw MethodError("cycle method must be 1..4");
    if ((method == 3 || method == 4) && d % 2 != 0)
        throw MethodError("cycle methods 3 and 4 need an even vertex count");

    TransferPlan plan;
    plan.arena = arena;
    plan.target = x;

    const CoinOp X = CoinOp::pauli_x();
    switch (method) {
        case 1: {
            // Clockwise for both branches: the line schedule verbatim, mod d.
            plan.tag = CaseTag::C_M1;
            plan.recovery_coin1 = X;
            plan.recovery_coin2 = CoinOp::identity(2);
            if (x % 2 == 0)
                plan.steps = alternating_steps(arena, 2 * x, {{x + 1, X}});
            else
                plan.steps = alternating_steps(arena, 2 * x + 1, {{x + 2, X}});
            break;
        }
        case 2: {
            // Anticlockwise for both branches; distance d-x.
            const std::int64_t y = d - x;
            plan.recovery_coin1 = X;
            plan.recovery_coin2 = X;
            if (y % 2 == 0) {
                plan.tag = CaseTag::C_M2_even;
                plan.steps = alternating_steps(arena, 2 * y, {{2, X}, {y + 1, X}});
            } else {
                plan.tag = CaseTag::C_M2_odd;
                plan.steps = alternating_steps(arena, 2 * y + 1, {{2, X}, {y + 2, X}});
            }
            break;
        }
        case 3: {
            // Branch a clockwise, branch b anticlockwise; one coin-2 flip.
            plan.recovery_coin1 = CoinOp::identity(2);
            plan.recovery_coin2 = X;
            if (x % 2 == 0) {
                plan.tag = CaseTag::C_M3_even;
                plan.steps = alternating_steps(arena, d, {{x + 2, X}});
            } else {
                plan.tag = CaseTag::C_M3_odd;
                // No single-flip schedule of d+1 steps closes both branches
                // on the same vertex: their displacements differ by d+2 mod d.
                // d-1 steps with the flip at x+1 does, and is what the oracle
                // certifies. x = d-1 needs the long round with the flip at d.
                if (x < d - 1)
                    plan.steps = alternating_steps(arena, d - 1, {{x + 1, X}});
                else
                    plan.steps = alternating_steps(arena, 2 * d - 1, {{d, X}});
            }
            break;
        }
        case 4: {
            // Mirror of method 3: an initial coin-1 flip swaps the branch
            // directions, the coin-2 placement is unchanged.
            plan.tag = CaseTag::C_M4;
            plan.recovery_coin1 = X;
            plan.recovery_coin2 = X;
            if (x % 2 == 0)
                plan.steps = alternating_steps(arena, d, {{1, X}, {x + 2, X}});
            else if (x < d - 1)
                plan.steps = alternating_steps(arena, d - 1, {{1, X}, {x + 1, X}});
            else
                plan.steps = alternating_steps(arena, 2 * d - 1, {{1, X}, {d, X}});
            break;
        }
    }
    return plan;
}

TransferPlan plan_complete(std::int64_t d, std::int64_t x) {
    if (d < 2) throw ArenaError("complete-graph transfer needs d >= 2");
    const GraphSpec arena = GraphSpec::complete_with_loops(d);
    if (x <= 0 || x >= d)
        throw TargetError("complete-graph target must lie in 1.." + std::to_string(d - 1));
    TransferPlan plan;
    plan.arena = arena;
    plan.target = x;
    plan.tag = CaseTag::KD_complete;
    const int dim = static_cast<int>(d);
    plan.recovery_coin1 = CoinOp::identity(dim);
    plan.recovery_coin2 = CoinOp::cyclic_shift_inverse(dim);
    plan.steps = alternating_steps(arena, 2 * d,
                                   {{static_cast<std::size_t>(2 * d - 2 * x + 2),
                                     CoinOp::cyclic_shift(dim)}});
    return plan;
}

TransferPlan plan_regular(std::int64_t n, std::int64_t d, std::int64_t x) {
    if (d < 2) throw ArenaError("regular-graph transfer needs degree >= 2");
    const GraphSpec arena = GraphSpec::circulant(n, d);
    if (x <= 0 || x >= n)
        throw TargetError("regular-graph target must lie in 1.." + std::to_string(n - 1));
    TransferPlan plan;
    plan.arena = arena;
    plan.target = x;
    plan.tag = CaseTag::KD_regular;
    const int dim = static_cast<int>(d);
    plan.recovery_coin1 = CoinOp::identity(dim);
    plan.recovery_coin2 = CoinOp::cyclic_shift_inverse(dim);
    plan.steps = alternating_steps(arena, 2 * n,
                                   {{static_cast<std::size_t>(2 * n - 2 * x + 2),
                                     CoinOp::cyclic_shift(dim)}});
    return plan;
}

TransferPlan revival_plan(const GraphSpec& arena) {
    if (arena.kind() != GraphKind::CompleteWithLoops && arena.kind() != GraphKind::Circulant)
        throw ArenaError("revival schedule is defined on the complete/circulant arenas");
    TransferPlan plan;
    plan.arena = arena;
    plan.target = 0;
    plan.tag = arena.kind() == GraphKind::CompleteWithLoops ? CaseTag::KD_complete
                                                            : CaseTag::KD_regular;
    const int dim = static_cast<int>(arena.degree());
    plan.recovery_coin1 = CoinOp::identity(dim);
    plan.recovery_coin2 = CoinOp::identity(dim);
    plan.steps = alternating_steps(arena, 2 * arena.vertices(), {});
    return plan;
}

namespace {

WalkState product_state(const TransferPlan& plan, std::int64_t position, const Vec& coin1) {
    const auto dims = plan.coin_dims();
    if (coin1.size() != static_cast<std::size_t>(dims[0]))
        throw SpaceMismatchError("input dimension " + std::to_string(coin1.size()) +
                                 " does not match coin 1 dimension " + std::to_string(dims[0]));
    if (std::abs(vec_norm(coin1) - 1.0) > 1e-6)
        throw ContractError("input coin state must be normalized");
    std::vector<std::pair<BasisLabel, Complex>> terms;
    for (std::size_t c = 0; c < coin1.size(); ++c) {
        if (coin1[c] == Complex{}) continue;
        terms.push_back({BasisLabel{position, {static_cast<std::int32_t>(c), 0}}, coin1[c]});
    }
    return make_state(plan.arena, dims, terms);
}

} // namespace

TransferReport run_transfer(const TransferPlan& plan, const Vec& input_coin1) {
    TransferReport report;
    report.plan = plan;
    report.trace.reserve(plan.steps.size() + 1);
    report.trace.push_back(product_state(plan, plan.start, input_coin1));
    for (const StepSpec& step : plan.steps)
        report.trace.push_back(apply_step(report.trace.back(), step));
    report.final_state = report.trace.back();
    report.corrected =
        apply_coin(apply_coin(report.final_state, 0, plan.recovery_coin1), 1, plan.recovery_coin2);
    report.target_state = product_state(plan, plan.target, input_coin1);
    report.fidelity = fidelity_up_to_phase(report.corrected, report.target_state);
    report.pass = report.fidelity >= 1.0 - kResultTol;
    return report;
}

double periodicity_check(std::int64_t x, const Vec& input_coin1) {
    if (x <= 0 || x % 2 != 0) throw TargetError("periodicity round trip needs a positive even x");
    const TransferPlan out = plan_line(x);
    const TransferPlan back = plan_line(-x);
    WalkState state = product_state(out, 0, input_coin1);
    for (const StepSpec& step : out.steps) state = apply_step(state, step);
    for (const StepSpec& step : back.steps) state = apply_step(state, step);

    // Walker and coin 1 revive exactly; the return leg's single coin-2 flip
    // leaves coin 2 at |1>.
    std::vector<std::pair<BasisLabel, Complex>> terms;
    for (std::size_t c = 0; c < input_coin1.size(); ++c)
        if (input_coin1[c] != Complex{})
            terms.push_back({BasisLabel{0, {static_cast<std::int32_t>(c), 1}}, input_coin1[c]});
    const WalkState revival = make_state(out.arena, out.coin_dims(), terms);
    return fidelity_up_to_phase(state, revival);
}

TransferReport route_from(std::int64_t l, const TransferPlan& plan, const Vec& input_coin1) {
    if (plan.arena.kind() != GraphKind::Line)
        throw ArenaError("routing from an arbitrary start is defined on the line");
    TransferPlan shifted = plan;
    shifted.start += l;
    shifted.target += l;
    return run_transfer(shifted, input_coin1);
}

} // namespace coinwalk
