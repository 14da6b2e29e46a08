#include <doctest.h>

#include <cmath>

#include "coinwalk/oracle.hpp"
#include "coinwalk/transfer.hpp"
#include "test_util.hpp"

using namespace coinwalk;
using testutil::amp_close;

namespace {
const Complex kA{0.6, 0.0};
const Complex kB{0.0, 0.8};
const Vec kQubit{kA, kB};
} // namespace

TEST_CASE("line plans follow the schedule tables") {
    SUBCASE("positive even: 2x steps, coin-1 flip at x+1") {
        const TransferPlan plan = plan_line(4);
        CHECK(plan.tag == CaseTag::L1_1);
        CHECK(plan.step_count() == 8);
        const auto placements = plan.nonidentity_placements();
        REQUIRE(placements.size() == 1);
        CHECK(std::get<0>(placements[0]) == 5);
        CHECK(std::get<1>(placements[0]) == 0);
        CHECK(plan.recovery_coin1.kind() == CoinKind::PauliX);
        CHECK(plan.recovery_coin2.is_identity());
    }
    SUBCASE("positive odd: 2x+1 steps, coin-1 flip at x+2") {
        const TransferPlan plan = plan_line(3);
        CHECK(plan.tag == CaseTag::L1_2);
        CHECK(plan.step_count() == 7);
        const auto placements = plan.nonidentity_placements();
        REQUIRE(placements.size() == 1);
        CHECK(std::get<0>(placements[0]) == 5);
    }
    SUBCASE("negative even: coin-2 flip at 2, coin-1 flip at |x|+1") {
        const TransferPlan plan = plan_line(-4);
        CHECK(plan.tag == CaseTag::L1_3);
        CHECK(plan.step_count() == 8);
        const auto placements = plan.nonidentity_placements();
        REQUIRE(placements.size() == 2);
        CHECK(std::get<0>(placements[0]) == 2);
        CHECK(std::get<1>(placements[0]) == 1);
        CHECK(std::get<0>(placements[1]) == 5);
        CHECK(std::get<1>(placements[1]) == 0);
        CHECK(plan.recovery_coin2.kind() == CoinKind::PauliX);
    }
    SUBCASE("negative odd: coin-2 flip at 2, coin-1 flip at |x|+2") {
        const TransferPlan plan = plan_line(-3);
        CHECK(plan.tag == CaseTag::L1_4);
        CHECK(plan.step_count() == 7);
        const auto placements = plan.nonidentity_placements();
        REQUIRE(placements.size() == 2);
        CHECK(std::get<0>(placements[1]) == 5);
    }
    CHECK_THROWS_AS((void)plan_line(0), TargetError);
}

TEST_CASE("line transfer reproduces the itemized case states") {
    SUBCASE("x = 2: intermediate and final states") {
        const TransferReport rep = run_transfer(plan_line(2), kQubit);
        CHECK(rep.plan.step_count() == 4);
        const WalkState& s2 = rep.trace[2];
        CHECK(amp_close(s2.amplitude({2, {0, 0}}), kA));
        CHECK(amp_close(s2.amplitude({0, {1, 0}}), kB));
        const WalkState& s3 = rep.trace[3];
        CHECK(amp_close(s3.amplitude({1, {1, 0}}), kA));
        CHECK(amp_close(s3.amplitude({1, {0, 0}}), kB));
        CHECK(amp_close(rep.final_state.amplitude({2, {1, 0}}), kA));
        CHECK(amp_close(rep.final_state.amplitude({2, {0, 0}}), kB));
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("x = -2: final state carries the flipped coin 2") {
        const TransferReport rep = run_transfer(plan_line(-2), kQubit);
        CHECK(amp_close(rep.final_state.amplitude({-2, {1, 1}}), kA));
        CHECK(amp_close(rep.final_state.amplitude({-2, {0, 1}}), kB));
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("x = 3 with random inputs") {
        Rng rng(51);
        for (int i = 0; i < 10; ++i) {
            const TransferReport rep = run_transfer(plan_line(3), random_state_vector(2, rng));
            CHECK(rep.fidelity >= 1.0 - 1e-10);
        }
    }
    SUBCASE("basis input keeps a single-label support at every step") {
        const TransferReport rep = run_transfer(plan_line(5), {1.0, 0.0});
        CHECK(rep.fidelity >= 1.0 - 1e-10);
        for (const WalkState& s : rep.trace) CHECK(s.amps.size() == 1);
    }
    SUBCASE("step counts across targets") {
        for (std::int64_t x = -8; x <= 8; ++x) {
            if (x == 0) continue;
            const auto ax = static_cast<std::size_t>(std::llabs(x));
            CHECK(plan_line(x).step_count() == (ax % 2 == 0 ? 2 * ax : 2 * ax + 1));
        }
    }
}

TEST_CASE("periodicity of the composite walk") {
    SUBCASE("the full 4x-step state, coin-2 flip included") {
        const TransferPlan out = plan_line(2);
        const TransferPlan back = plan_line(-2);
        WalkState s = run_transfer(out, kQubit).final_state;
        for (const StepSpec& step : back.steps) s = apply_step(s, step);
        CHECK(s.amps.size() == 2);
        CHECK(amp_close(s.amplitude({0, {0, 1}}), kA));
        CHECK(amp_close(s.amplitude({0, {1, 1}}), kB));
    }
    CHECK(periodicity_check(2, kQubit) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(periodicity_check(4, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(52);
    CHECK(periodicity_check(6, random_state_vector(2, rng)) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS((void)periodicity_check(3, kQubit), TargetError);
    CHECK_THROWS_AS((void)periodicity_check(-2, kQubit), TargetError);
}

TEST_CASE("routing from an arbitrary start") {
    SUBCASE("l = 5 with x = 2 lands on 7") {
        const TransferReport rep = route_from(5, plan_line(2), kQubit);
        CHECK(rep.plan.target == 7);
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(amp_close(rep.corrected.amplitude({7, {0, 0}}), kA));
    }
    SUBCASE("l = 0 matches run_transfer") {
        const TransferReport a = route_from(0, plan_line(3), kQubit);
        const TransferReport b = run_transfer(plan_line(3), kQubit);
        CHECK(max_amplitude_diff(a.corrected, b.corrected) < 1e-14);
    }
    SUBCASE("negative start and negative target") {
        const TransferReport rep = route_from(-3, plan_line(-2), kQubit);
        CHECK(rep.plan.target == -5);
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("translation invariance over random starts") {
        Rng rng(53);
        const double base = run_transfer(plan_line(4), kQubit).fidelity;
        for (int i = 0; i < 20; ++i) {
            const auto l = static_cast<std::int64_t>(rng.next_u64() % 2001) - 1000;
            CHECK(route_from(l, plan_line(4), kQubit).fidelity ==
                  doctest::Approx(base).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS((void)route_from(1, plan_cycle(6, 2, 1), kQubit), ArenaError);
}

TEST_CASE("cycle plans") {
    SUBCASE("method 1 reuses the line schedule and final state") {
        const TransferReport rep = run_transfer(plan_cycle(7, 4, 1), kQubit);
        CHECK(rep.plan.step_count() == 8);
        CHECK(amp_close(rep.final_state.amplitude({4, {1, 0}}), kA));
        CHECK(amp_close(rep.final_state.amplitude({4, {0, 0}}), kB));
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("method 2 takes 2d-2x steps for even distance") {
        const TransferPlan plan = plan_cycle(7, 5, 2);
        CHECK(plan.tag == CaseTag::C_M2_even);
        CHECK(plan.step_count() == 4);
        CHECK(run_transfer(plan, kQubit).fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("method 3, even target: d steps, coin-2 flip at x+2") {
        const TransferPlan plan = plan_cycle(8, 2, 3);
        CHECK(plan.step_count() == 8);
        const auto placements = plan.nonidentity_placements();
        REQUIRE(placements.size() == 1);
        CHECK(std::get<0>(placements[0]) == 4);
        CHECK(std::get<1>(placements[0]) == 1);
        const TransferReport rep = run_transfer(plan, kQubit);
        CHECK(amp_close(rep.final_state.amplitude({2, {0, 1}}), kA));
        CHECK(amp_close(rep.final_state.amplitude({2, {1, 1}}), kB));
        CHECK(rep.plan.recovery_coin1.is_identity());
        CHECK(rep.plan.recovery_coin2.kind() == CoinKind::PauliX);
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("method 3, even target: every itemized intermediate state") {
        const std::int64_t d = 8, x = 4;
        const TransferReport rep = run_transfer(plan_cycle(d, x, 3), kQubit);
        auto expect = [&](std::size_t i, std::int64_t pa, std::int32_t c1a, std::int32_t c2a,
                          std::int64_t pb, std::int32_t c1b, std::int32_t c2b) {
            const WalkState& s = rep.trace[i];
            CHECK(amp_close(s.amplitude({pa, {c1a, c2a}}), kA));
            CHECK(amp_close(s.amplitude({pb, {c1b, c2b}}), kB));
            CHECK(s.amps.size() == 2);
        };
        expect(1, 1, 0, 0, d - 1, 1, 0);
        expect(2, 2, 0, 0, 0, 1, 0);
        expect(x, x, 0, 0, 0, 1, 0);
        expect(x + 1, x + 1, 0, 0, d - 1, 1, 0);
        expect(x + 2, x, 0, 1, d - 2, 1, 1);
        expect(d - 1, x + 1, 0, 1, x + 1, 1, 1);
        expect(d, x, 0, 1, x, 1, 1);
    }
    SUBCASE("method 3, odd target: d-1 steps with the flip at x+1") {
        const TransferPlan plan = plan_cycle(8, 3, 3);
        CHECK(plan.tag == CaseTag::C_M3_odd);
        CHECK(plan.step_count() == 7);
        const auto placements = plan.nonidentity_placements();
        REQUIRE(placements.size() == 1);
        CHECK(std::get<0>(placements[0]) == 4); // x+1
        CHECK(run_transfer(plan, kQubit).fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("method 3, top odd target runs the long round") {
        const TransferPlan plan = plan_cycle(6, 5, 3);
        CHECK(plan.step_count() == 11); // 2d-1
        CHECK(run_transfer(plan, kQubit).fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("method 4 mirrors method 3 with an initial coin-1 flip") {
        const TransferPlan plan = plan_cycle(8, 4, 4);
        const auto placements = plan.nonidentity_placements();
        REQUIRE(placements.size() == 2);
        CHECK(std::get<0>(placements[0]) == 1);
        CHECK(std::get<1>(placements[0]) == 0);
        CHECK(run_transfer(plan, kQubit).fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("full grid: every method, every target, random inputs") {
        Rng rng(54);
        for (std::int64_t d = 3; d <= 10; ++d)
            for (int method : {1, 2, 3, 4}) {
                if (method >= 3 && d % 2 != 0) continue;
                for (std::int64_t x = 1; x < d; ++x) {
                    const TransferPlan plan = plan_cycle(d, x, method);
                    for (int i = 0; i < 3; ++i)
                        CHECK(run_transfer(plan, random_state_vector(2, rng)).fidelity >=
                              1.0 - 1e-10);
                }
            }
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS((void)plan_cycle(6, 0, 1), TargetError);
        CHECK_THROWS_AS((void)plan_cycle(6, 6, 1), TargetError);
        CHECK_THROWS_AS((void)plan_cycle(7, 2, 3), MethodError);
        CHECK_THROWS_AS((void)plan_cycle(7, 2, 4), MethodError);
        CHECK_THROWS_AS((void)plan_cycle(6, 2, 5), MethodError);
        CHECK_THROWS_AS((void)plan_cycle(2, 1, 1), ArenaError);
    }
}

TEST_CASE("complete-graph qudit transfer") {
    SUBCASE("d = 3, x = 1: the closing congruence parks every branch at x") {
        Rng rng(55);
        const Vec qudit = random_state_vector(3, rng);
        const TransferReport rep = run_transfer(plan_complete(3, 1), qudit);
        CHECK(rep.plan.step_count() == 6);
        for (int k = 0; k < 3; ++k)
            CHECK(amp_close(rep.final_state.amplitude({1, {k, 1}}), qudit[k]));
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("d = 5, x = 2: itemized states around the coin-2 flip") {
        Rng rng(62);
        const std::int64_t d = 5, x = 2;
        const Vec qudit = random_state_vector(d, rng);
        const TransferReport rep = run_transfer(plan_complete(d, x), qudit);
        auto amp_at = [&](std::size_t step, std::int64_t pos, std::int32_t c1, std::int32_t c2) {
            return rep.trace[step].amplitude({pos, {c1, c2}});
        };
        for (std::int32_t k = 0; k < d; ++k) {
            CHECK(amp_close(amp_at(2 * d - 2 * x, ((d - x) * k) % d, k, 0), qudit[k]));
            CHECK(amp_close(amp_at(2 * d - 2 * x + 1, ((d - x) * k + k) % d, k, 0), qudit[k]));
            CHECK(amp_close(amp_at(2 * d - 2 * x + 2, ((d - x) * k + k + 1) % d, k, 1), qudit[k]));
            CHECK(amp_close(amp_at(2 * d, x, k, 1), qudit[k]));
        }
    }
    SUBCASE("all-identity schedule revives the qudit at 0") {
        Rng rng(56);
        for (std::int64_t d : {2, 5, 8}) {
            const Vec qudit = random_state_vector(d, rng);
            const TransferReport rep =
                run_transfer(revival_plan(GraphSpec::complete_with_loops(d)), qudit);
            CHECK(rep.plan.step_count() == static_cast<std::size_t>(2 * d));
            CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-10));
            for (std::int64_t k = 0; k < d; ++k)
                CHECK(amp_close(rep.final_state.amplitude({0, {static_cast<std::int32_t>(k), 0}}),
                                qudit[k], 1e-10));
        }
    }
    SUBCASE("d = 5, x = 3 with random qudits") {
        Rng rng(57);
        for (int i = 0; i < 10; ++i)
            CHECK(run_transfer(plan_complete(5, 3), random_state_vector(5, rng)).fidelity >=
                  1.0 - 1e-10);
    }
    SUBCASE("flip sits at step 2d-2x+2 on coin 2") {
        const auto placements = plan_complete(5, 3).nonidentity_placements();
        REQUIRE(placements.size() == 1);
        CHECK(std::get<0>(placements[0]) == 6);
        CHECK(std::get<1>(placements[0]) == 1);
        CHECK(std::get<2>(placements[0]).kind() == CoinKind::CyclicShift);
    }
    CHECK_THROWS_AS((void)plan_complete(3, 0), TargetError);
    CHECK_THROWS_AS((void)plan_complete(3, 3), TargetError);
    CHECK_THROWS_AS((void)plan_complete(1, 1), ArenaError);
}

TEST_CASE("regular-graph qudit transfer") {
    SUBCASE("n = d coincides with the complete graph plan") {
        const TransferPlan reg = plan_regular(4, 4, 2);
        const TransferPlan comp = plan_complete(4, 2);
        CHECK(reg.step_count() == comp.step_count());
        const auto pr = reg.nonidentity_placements();
        const auto pc = comp.nonidentity_placements();
        REQUIRE(pr.size() == pc.size());
        CHECK(std::get<0>(pr[0]) == std::get<0>(pc[0]));
        CHECK(std::get<1>(pr[0]) == std::get<1>(pc[0]));
        Rng rng(58);
        const Vec qudit = random_state_vector(4, rng);
        CHECK(run_transfer(reg, qudit).fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("n = 7, d = 3, x = 2: final state collapses to the target") {
        Rng rng(59);
        const Vec qudit = random_state_vector(3, rng);
        const TransferReport rep = run_transfer(plan_regular(7, 3, 2), qudit);
        CHECK(rep.plan.step_count() == 14);
        for (int k = 0; k < 3; ++k)
            CHECK(amp_close(rep.final_state.amplitude({2, {k, 1}}), qudit[k]));
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("revival on the circulant arena") {
        Rng rng(60);
        const Vec qudit = random_state_vector(3, rng);
        const TransferReport rep = run_transfer(revival_plan(GraphSpec::circulant(9, 3)), qudit);
        CHECK(rep.plan.step_count() == 18);
        CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS((void)plan_regular(9, 3, 0), TargetError);
    CHECK_THROWS_AS((void)plan_regular(9, 3, 9), TargetError);
    CHECK_THROWS_AS((void)plan_regular(3, 4, 1), ArenaError);
}

TEST_CASE("schedule structure invariants") {
    Rng rng(61);
    std::vector<TransferPlan> plans;
    for (std::int64_t x : {-7, -4, 3, 8}) plans.push_back(plan_line(x));
    for (int m : {1, 2, 3, 4}) plans.push_back(plan_cycle(8, 5, m));
    plans.push_back(plan_complete(6, 2));
    plans.push_back(plan_regular(9, 4, 5));

    for (const TransferPlan& plan : plans) {
        const auto placements = plan.nonidentity_placements();
        const bool qudit_case =
            plan.tag == CaseTag::KD_complete || plan.tag == CaseTag::KD_regular;
        if (qudit_case)
            CHECK(placements.size() == 1);
        else
            CHECK(placements.size() <= 2);
        for (std::size_t i = 0; i < plan.steps.size(); ++i)
            CHECK(plan.steps[i].active_coin == static_cast<int>(i % 2 == 0 ? 0 : 1));
        for (const auto& [step, coin, op] : placements)
            CHECK(static_cast<int>(step % 2 == 1 ? 0 : 1) == coin);
    }
}
