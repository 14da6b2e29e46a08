#include <doctest.h>

#include <cmath>

#include "coinwalk/hilbert.hpp"
#include "coinwalk/operators.hpp"
#include "coinwalk/oracle.hpp"
#include "coinwalk/teleport.hpp"
#include "test_util.hpp"

using namespace coinwalk;
using testutil::amp_close;

namespace {
const Complex kA{0.6, 0.0};
const Complex kB{0.0, 0.8};
} // namespace

TEST_CASE("make_state builds normalized states") {
    SUBCASE("walker at 0 with a qubit on coin 1") {
        const WalkState s = make_state(GraphSpec::line(), {2, 2},
                                       {{{0, {0, 0}}, kA}, {{0, {1, 0}}, kB}});
        CHECK(s.amps.size() == 2);
        CHECK(amp_close(s.amplitude({0, {0, 0}}), kA));
        CHECK(amp_close(s.amplitude({0, {1, 0}}), kB));
        CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("single basis term on a cycle") {
        const WalkState s = make_state(GraphSpec::cycle(4), {2, 2}, {{{0, {0, 0}}, 1.0}});
        CHECK(s.amps.size() == 1);
        CHECK(amp_close(s.amplitude({0, {0, 0}}), 1.0));
    }
    SUBCASE("duplicate labels merge before normalization") {
        const WalkState s = make_state(GraphSpec::line(), {2, 2},
                                       {{{0, {0, 0}}, 2.0}, {{0, {0, 0}}, 0.0}});
        CHECK(s.amps.size() == 1);
        CHECK(amp_close(s.amplitude({0, {0, 0}}), 1.0));
    }
    SUBCASE("overall scale is divided out") {
        const WalkState s = make_state(GraphSpec::line(), {2}, {{{0, {0}}, Complex{0.0, 3.0}}});
        CHECK(amp_close(s.amplitude({0, {0}}), Complex{0.0, 1.0}));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(make_state(GraphSpec::line(), {2, 2}, {}), ZeroStateError);
        CHECK_THROWS_AS(make_state(GraphSpec::line(), {2, 2},
                                   {{{0, {0, 0}}, 1.0}, {{0, {0, 0}}, -1.0}}),
                        ZeroStateError);
        CHECK_THROWS_AS(make_state(GraphSpec::line(), {2, 2}, {{{0, {2, 0}}, 1.0}}), LabelError);
        CHECK_THROWS_AS(make_state(GraphSpec::cycle(4), {2, 2}, {{{4, {0, 0}}, 1.0}}), LabelError);
        CHECK_THROWS_AS(make_state(GraphSpec::line(), {2, 2}, {{{0, {0}}, 1.0}}), LabelError);
    }
}

TEST_CASE("inner products") {
    Rng rng(11);
    const WalkState u = testutil::random_walk_state(GraphSpec::line(), {2, 2}, 6, rng);
    const WalkState v = testutil::random_walk_state(GraphSpec::line(), {2, 2}, 6, rng);

    CHECK(std::abs(inner_product(u, u) - Complex{1.0, 0.0}) < 1e-12);
    CHECK(inner_product(make_state(GraphSpec::line(), {2, 2}, {{{0, {0, 0}}, 1.0}}),
                        make_state(GraphSpec::line(), {2, 2}, {{{0, {1, 0}}, 1.0}})) ==
          Complex{});
    CHECK(std::abs(inner_product(u, v) - std::conj(inner_product(v, u))) < 1e-14);

    SUBCASE("matches the dense oracle on an evolved pair") {
        std::vector<StepSpec> steps;
        for (int i = 0; i < 6; ++i)
            steps.push_back(make_step(GraphSpec::line(), i % 2,
                                      i % 2 == 0 ? CoinOp::fourier(2) : CoinOp::pauli_x()));
        WalkState evolved = u;
        for (const StepSpec& s : steps) evolved = apply_step(evolved, s);

        const DenseSystem system = build_dense(GraphSpec::line(), {2, 2}, steps, 0);
        const Vec dense_final = dense_evolve(system, flatten(u, system.layout));
        const Complex sparse_ip = inner_product(u, evolved);
        const Complex dense_ip = vec_inner(flatten(u, system.layout), dense_final);
        CHECK(std::abs(sparse_ip - dense_ip) < 1e-12);
    }
    SUBCASE("space mismatch") {
        const WalkState w = make_state(GraphSpec::cycle(4), {2, 2}, {{{0, {0, 0}}, 1.0}});
        CHECK_THROWS_AS((void)inner_product(u, w), SpaceMismatchError);
        const WalkState y = make_state(GraphSpec::line(), {2}, {{{0, {0}}, 1.0}});
        CHECK_THROWS_AS((void)inner_product(u, y), SpaceMismatchError);
    }
}

TEST_CASE("fidelity up to a global phase") {
    Rng rng(12);
    const WalkState u = testutil::random_walk_state(GraphSpec::line(), {2, 2}, 5, rng);

    CHECK(fidelity_up_to_phase(u, u) == doctest::Approx(1.0).epsilon(1e-12));

    WalkState phased = u;
    const Complex phase = std::polar(1.0, 1.234);
    for (auto& [label, amp] : phased.amps) amp *= phase;
    CHECK(fidelity_up_to_phase(u, phased) == doctest::Approx(1.0).epsilon(1e-12));

    const WalkState e0 = make_state(GraphSpec::line(), {2, 2}, {{{0, {0, 0}}, 1.0}});
    const WalkState e1 = make_state(GraphSpec::line(), {2, 2}, {{{0, {1, 0}}, 1.0}});
    CHECK(fidelity_up_to_phase(e0, e1) == 0.0);

    SUBCASE("symmetric, and 1 exactly means equal up to phase") {
        const WalkState v = testutil::random_walk_state(GraphSpec::line(), {2, 2}, 5, rng);
        CHECK(fidelity_up_to_phase(u, v) == doctest::Approx(fidelity_up_to_phase(v, u)));

        // phase extraction on the largest-modulus shared label
        const auto largest = std::max_element(
            u.amps.begin(), u.amps.end(), [](const auto& a, const auto& b) {
                return std::abs(a.second) < std::abs(b.second);
            });
        const Complex theta = phased.amplitude(largest->first) / largest->second;
        WalkState aligned = phased;
        for (auto& [label, amp] : aligned.amps) amp /= theta;
        CHECK(max_amplitude_diff(aligned, u) < 1e-12);

        WalkState perturbed = u;
        perturbed.amps.begin()->second *= std::polar(1.0, 0.3);
        double renorm = perturbed.norm();
        for (auto& [label, amp] : perturbed.amps) amp /= renorm;
        CHECK(fidelity_up_to_phase(u, perturbed) < 1.0 - 1e-6);
    }
}

TEST_CASE("project_subsystem") {
    const double r = 1.0 / std::sqrt(2.0);

    SUBCASE("line-teleport position measurement collapses the two-step state") {
        // |0>(a|01>+b|10>)/sqrt2 + (|-2> b|11> + |2> a|00>)/sqrt2
        const WalkState s = make_state(GraphSpec::line(), {2, 2},
                                       {{{0, {0, 1}}, kA * r},
                                        {{0, {1, 0}}, kB * r},
                                        {{-2, {1, 1}}, kB * r},
                                        {{2, {0, 0}}, kA * r}});
        const SubsystemBasis basis{{{0, 1.0}},
                                   {{-2, r}, {2, r}},
                                   {{-2, r}, {2, -r}}};
        const auto outcomes = project_subsystem(s, Subsystem::position(), basis);
        REQUIRE(outcomes.size() == 3);
        CHECK(outcomes[0].basis_index == 0);
        CHECK(outcomes[0].probability == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(amp_close(outcomes[0].post.amplitude({0, {0, 1}}), kA));
        CHECK(amp_close(outcomes[0].post.amplitude({0, {1, 0}}), kB));
        CHECK(outcomes[0].post.amps.size() == 2);
    }

    SUBCASE("a basis state measured in its own basis") {
        const WalkState s = make_state(GraphSpec::cycle(5), {2, 2}, {{{3, {1, 0}}, 1.0}});
        SubsystemBasis basis;
        for (std::int64_t v = 0; v < 5; ++v) basis.push_back({{v, 1.0}});
        const auto outcomes = project_subsystem(s, Subsystem::position(), basis);
        REQUIRE(outcomes.size() == 1); // zero-probability outcomes omitted
        CHECK(outcomes[0].basis_index == 3);
        CHECK(outcomes[0].probability == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(max_amplitude_diff(outcomes[0].post, s) < 1e-12);
    }

    SUBCASE("complete-graph teleport state splits evenly over vertices") {
        Rng rng(21);
        const TeleportPlan plan = complete_teleport_plan(3, 1);
        WalkState s = teleport_initial(plan, random_state_vector(3, rng));
        s = apply_step(s, make_step(plan.arena, 0, CoinOp::identity(3)));
        s = apply_step(s, make_step(plan.arena, 1, CoinOp::identity(3)));
        const auto outcomes = project_subsystem(s, Subsystem::position(), plan.position_basis);
        REQUIRE(outcomes.size() == 3);
        for (const auto& out : outcomes)
            CHECK(out.probability == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    }

    SUBCASE("measurement completeness: outcomes recombine to the input") {
        Rng rng(22);
        for (int trial = 0; trial < 10; ++trial) {
            const WalkState s = testutil::random_walk_state(GraphSpec::cycle(6), {3, 3}, 8, rng);
            const Matrix u = testutil::random_unitary(3, rng);
            SubsystemBasis basis;
            for (std::size_t k = 0; k < 3; ++k) {
                SubsystemVector v;
                for (std::size_t m = 0; m < 3; ++m) v[static_cast<std::int64_t>(m)] = u(m, k);
                basis.push_back(std::move(v));
            }
            const auto outcomes = project_subsystem(s, Subsystem::coin_register(1), basis);
            double total = 0.0;
            WalkState recombined{s.arena, s.coin_dims, {}};
            for (const auto& out : outcomes) {
                total += out.probability;
                CHECK(out.post.norm() == doctest::Approx(1.0).epsilon(1e-10));
                const double w = std::sqrt(out.probability);
                for (const auto& [label, amp] : out.post.amps) recombined.amps[label] += w * amp;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(max_amplitude_diff(recombined, s) < 1e-10);
        }
    }

    SUBCASE("errors") {
        const WalkState s = make_state(GraphSpec::line(), {2, 2},
                                       {{{0, {0, 0}}, kA}, {{2, {1, 0}}, kB}});
        const SubsystemBasis skewed{{{0, 1.0}}, {{0, r}, {2, r}}};
        CHECK_THROWS_AS((void)project_subsystem(s, Subsystem::position(), skewed), BasisError);
        const SubsystemBasis partial{{{0, 1.0}}};
        CHECK_THROWS_AS((void)project_subsystem(s, Subsystem::position(), partial), CoverageError);
        CHECK_THROWS_AS((void)project_subsystem(s, Subsystem::position(), {}), BasisError);
        const SubsystemBasis bad_coin{{{5, 1.0}}};
        CHECK_THROWS_AS((void)project_subsystem(s, Subsystem::coin_register(0), bad_coin),
                        BasisError);
    }
}

TEST_CASE("norm conservation under walk steps") {
    Rng rng(31);
    for (const GraphSpec& arena : {GraphSpec::line(), GraphSpec::cycle(5),
                                   GraphSpec::complete_with_loops(4), GraphSpec::circulant(7, 3)}) {
        const int d = static_cast<int>(arena.degree());
        WalkState s = testutil::random_walk_state(arena, {d, d}, 6, rng);
        for (int i = 0; i < 12; ++i) {
            const CoinOp op = (i % 3 == 0) ? CoinOp::custom(testutil::random_unitary(d, rng))
                                           : (i % 3 == 1 ? CoinOp::fourier(d) : CoinOp::identity(d));
            s = apply_step(s, make_step(arena, i % 2, op));
            CHECK(std::abs(s.norm() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("sparsity soundness: sparse states match the dense oracle for 20 steps") {
    Rng rng(32);
    const GraphSpec arena = GraphSpec::line();
    std::vector<StepSpec> steps;
    for (int i = 0; i < 20; ++i) {
        const CoinOp op = (i % 4 == 3) ? CoinOp::custom(testutil::random_unitary(2, rng))
                                       : CoinOp::fourier(2);
        steps.push_back(make_step(arena, i % 2, op));
    }
    const WalkState initial = make_state(arena, {2, 2}, {{{0, {0, 0}}, kA}, {{0, {1, 0}}, kB}});
    const DenseSystem system = build_dense(arena, {2, 2}, steps, 0);
    auto dense = dense_trace(system, flatten(initial, system.layout));

    WalkState s = initial;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        s = apply_step(s, steps[i]);
        CHECK(vec_max_diff(flatten(s, system.layout), dense[i + 1]) < 1e-12);
    }
}
