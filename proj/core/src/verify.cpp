#include "coinwalk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "coinwalk/oracle.hpp"
#include "coinwalk/rng.hpp"
#include "coinwalk/teleport.hpp"
#include "coinwalk/transfer.hpp"

namespace coinwalk::verify {

namespace {

constexpr int kInputsPerPoint = 20;

struct Tally {
    bool pass = true;
    double min_fidelity = 1.0;
    int runs = 0;
    std::ostringstream notes;

    void fidelity(double f) {
        min_fidelity = std::min(min_fidelity, f);
        ++runs;
        if (f < 1.0 - kResultTol) pass = false;
    }
    void require(bool ok, const std::string& why) {
        if (!ok) {
            pass = false;
            notes << "; FAILED: " << why;
        }
    }
    std::string detail(const std::string& head) const {
        std::ostringstream out;
        out << head << "; " << runs << " runs, min fidelity " << min_fidelity << notes.str();
        return out.str();
    }
};

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

CriterionResult line_transfer() {
    Tally t;
    Rng rng(101);
    for (std::int64_t x = -8; x <= 8; ++x) {
        if (x == 0) continue;
        const TransferPlan plan = plan_line(x);
        const std::size_t ax = static_cast<std::size_t>(std::llabs(x));
        const std::size_t want_steps = ax % 2 == 0 ? 2 * ax : 2 * ax + 1;
        t.require(plan.step_count() == want_steps, "step count for x=" + std::to_string(x));
        for (int i = 0; i < kInputsPerPoint; ++i)
            t.fidelity(run_transfer(plan, random_state_vector(2, rng)).fidelity);
    }

    // Itemized trace states of the positive-even and negative-even cases.
    const Vec in = random_state_vector(2, rng);
    const Complex a = in[0], b = in[1];
    {
        const TransferReport rep = run_transfer(plan_line(2), in);
        const WalkState& s1 = rep.trace[1];
        t.require(close(s1.amplitude({1, {0, 0}}), a, kOracleTol) &&
                      close(s1.amplitude({-1, {1, 0}}), b, kOracleTol) && s1.amps.size() == 2,
                  "x=2 step-1 state");
        const WalkState& s2 = rep.trace[2];
        t.require(close(s2.amplitude({2, {0, 0}}), a, kOracleTol) &&
                      close(s2.amplitude({0, {1, 0}}), b, kOracleTol) && s2.amps.size() == 2,
                  "x=2 step-2 state");
        t.require(close(rep.final_state.amplitude({2, {1, 0}}), a, kOracleTol) &&
                      close(rep.final_state.amplitude({2, {0, 0}}), b, kOracleTol),
                  "x=2 final state");
    }
    {
        const TransferReport rep = run_transfer(plan_line(-2), in);
        t.require(close(rep.final_state.amplitude({-2, {1, 1}}), a, kOracleTol) &&
                      close(rep.final_state.amplitude({-2, {0, 1}}), b, kOracleTol),
                  "x=-2 final state");
    }
    return {1, "line transfer x in +-1..8", t.pass, t.detail("16 targets x 20 random inputs")};
}

CriterionResult periodicity() {
    Tally t;
    Rng rng(202);
    for (std::int64_t x : {2, 4, 6}) {
        t.fidelity(periodicity_check(x, {1.0, 0.0}));
        for (int i = 0; i < 5; ++i) t.fidelity(periodicity_check(x, random_state_vector(2, rng)));
    }
    return {2, "periodicity of the 4x-step round trip", t.pass,
            t.detail("x in {2,4,6}; revival exact on walker and coin 1, coin 2 ends flipped")};
}

CriterionResult cycle_transfer() {
    Tally t;
    Rng rng(303);
    for (std::int64_t d = 3; d <= 10; ++d)
        for (int method : {1, 2})
            for (std::int64_t x = 1; x < d; ++x) {
                const TransferPlan plan = plan_cycle(d, x, method);
                for (int i = 0; i < kInputsPerPoint; ++i)
                    t.fidelity(run_transfer(plan, random_state_vector(2, rng)).fidelity);
            }

    int certified = 0;
    for (std::int64_t d = 4; d <= 10; d += 2)
        for (int method : {3, 4})
            for (std::int64_t x = 1; x < d; ++x) {
                const TransferPlan plan = plan_cycle(d, x, method);
                if (method == 3 && x % 2 == 0)
                    t.require(plan.step_count() == static_cast<std::size_t>(d),
                              "method-3 even-x step count");
                for (int i = 0; i < kInputsPerPoint; ++i)
                    t.fidelity(run_transfer(plan, random_state_vector(2, rng)).fidelity);
                if (method == 4 || x % 2 == 1) {
                    const CertificationRecord record = certify_schedule(plan, 5);
                    t.require(record.pass, "certification " + case_tag_name(plan.tag) + " d=" +
                                               std::to_string(d) + " x=" + std::to_string(x));
                    ++certified;
                }
            }
    t.notes << "; " << certified << " method-3-odd/method-4 schedules oracle-certified";
    return {3, "cycle transfer methods 1-4, d in 3..10", t.pass, t.detail("all targets")};
}

CriterionResult complete_transfer() {
    Tally t;
    Rng rng(404);
    for (std::int64_t d = 2; d <= 8; ++d) {
        for (std::int64_t x = 1; x < d; ++x) {
            const TransferPlan plan = plan_complete(d, x);
            t.require(plan.step_count() == static_cast<std::size_t>(2 * d), "2d step count");
            for (int i = 0; i < kInputsPerPoint; ++i)
                t.fidelity(run_transfer(plan, random_state_vector(d, rng)).fidelity);
        }
        const TransferReport revival =
            run_transfer(revival_plan(GraphSpec::complete_with_loops(d)),
                         random_state_vector(d, rng));
        t.require(revival.fidelity >= 1.0 - kResultTol, "revival at position 0, d=" +
                                                            std::to_string(d));
    }
    return {4, "complete-graph qudit transfer d in 2..8", t.pass,
            t.detail("all targets x 20 random qudits; all-identity revival included")};
}

CriterionResult regular_transfer() {
    Tally t;
    Rng rng(505);
    std::ostringstream feasible;
    for (const auto& [n, d] : std::vector<std::pair<std::int64_t, std::int64_t>>{
             {5, 3}, {7, 3}, {9, 3}, {7, 4}, {9, 4}, {11, 5}}) {
        int ok = 0, bad = 0;
        for (std::int64_t x = 1; x < n; ++x) {
            const TransferPlan plan = plan_regular(n, d, x);
            const CertificationRecord record = certify_schedule(plan, 3);
            if (!record.pass) {
                ++bad;
                feasible << " (" << n << "," << d << ") x=" << x << " infeasible;";
                continue;
            }
            ++ok;
            for (int i = 0; i < kInputsPerPoint; ++i)
                t.fidelity(run_transfer(plan, random_state_vector(d, rng)).fidelity);
        }
        feasible << " (" << n << "," << d << "): " << ok << "/" << (ok + bad) << " targets feasible;";
    }
    return {5, "regular-graph qudit transfer, certified targets", t.pass,
            t.detail("feasible sets:" + feasible.str())};
}

CriterionResult teleport_line_criterion() {
    Tally t;
    Rng rng(606);
    for (std::int64_t n : {2, 4, 10}) {
        std::vector<Vec> inputs{{1.0, 0.0}};
        for (int i = 0; i < kInputsPerPoint; ++i) inputs.push_back(random_state_vector(2, rng));
        for (const Vec& input : inputs) {
            const auto branches = teleport_line(n, input);
            double total = 0.0;
            for (const MeasurementBranch& b : branches) {
                total += b.probability;
                t.fidelity(vec_fidelity_up_to_phase(b.corrected, input));
            }
            t.require(std::abs(total - 1.0) <= kResultTol, "branch probabilities sum to 1");
        }
    }
    return {6, "line teleportation n in {2,4,10}", t.pass, t.detail("exhaustive branches")};
}

CriterionResult teleport_cycle_criterion() {
    Tally t;
    Rng rng(707);
    for (std::int64_t d : {4, 8, 12}) {
        const Vec input = random_state_vector(2, rng);
        const auto branches = teleport_cycle(d, input);
        double at_zero = 0.0, at_half = 0.0;
        for (const MeasurementBranch& b : branches) {
            t.require(b.position_outcome == 0 || b.position_outcome == 1,
                      "unexpected position outcome");
            (b.position_outcome == 0 ? at_zero : at_half) += b.probability;
            t.fidelity(vec_fidelity_up_to_phase(b.corrected, input));
        }
        t.require(std::abs(at_zero - 0.5) <= kResultTol && std::abs(at_half - 0.5) <= kResultTol,
                  "positions 0 and d/2 each carry probability 1/2");
    }
    return {7, "cycle teleportation d in {4,8,12}", t.pass,
            t.detail("two revival positions, probability 1/2 each")};
}

CriterionResult teleport_complete_criterion() {
    Tally t;
    Rng rng(808);
    for (std::int64_t d : {2, 3, 5, 7}) {
        bool rejected_checked = false;
        for (std::int64_t tt = 1; tt <= 2 * d; ++tt) {
            if (std::gcd(tt, d) != 1) {
                try {
                    (void)teleport_complete(d, tt, random_state_vector(d, rng));
                    t.require(false, "gcd(t,d) != 1 accepted");
                } catch (const CoprimalityError&) {
                    rejected_checked = true;
                }
                continue;
            }
            std::set<std::int64_t> outcomes;
            for (std::int64_t s = 0; s < d; ++s) outcomes.insert((tt * s) % d);
            t.require(outcomes.size() == static_cast<std::size_t>(d),
                      "s -> t*s mod d not injective");

            const Vec input = random_state_vector(d, rng);
            const auto branches = teleport_complete(d, tt, input);
            t.require(branches.size() == static_cast<std::size_t>(d * d), "d^2 branches");
            double total = 0.0;
            for (const MeasurementBranch& b : branches) {
                total += b.probability;
                t.fidelity(vec_fidelity_up_to_phase(b.corrected, input));
            }
            t.require(std::abs(total - 1.0) <= kResultTol, "branch probabilities sum to 1");
        }
        t.require(d == 1 || rejected_checked, "coprimality rejection exercised");
    }
    return {8, "complete-graph teleportation d in {2,3,5,7}", t.pass,
            t.detail("every admissible t <= 2d; outcome map injective; bad t rejected")};
}

CriterionResult teleport_regular_criterion() {
    Tally t;
    Rng rng(909);
    for (const auto& [n, d, tt] : std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{
             {5, 3, 1}, {9, 3, 2}, {7, 3, 1}, {11, 4, 3}}) {
        const TeleportPlan plan = regular_teleport_plan(n, d, tt);
        const Vec input = random_state_vector(d, rng);

        WalkState state = teleport_initial(plan, input);
        for (std::int64_t i = 1; i <= 2 * plan.half_steps; ++i)
            state = apply_step(state, make_step(plan.arena, (i % 2 == 1) ? 0 : 1,
                                                CoinOp::identity(static_cast<int>(d))));
        std::set<std::int64_t> support;
        for (const auto& [label, amp] : state.amps) support.insert(label.position);
        t.require(support.size() == static_cast<std::size_t>(2 * d - 1),
                  "position support has 2d-1 labels");

        double total = 0.0;
        for (const MeasurementBranch& b : run_teleport(plan, input)) {
            total += b.probability;
            t.fidelity(vec_fidelity_up_to_phase(b.corrected, input));
        }
        t.require(std::abs(total - 1.0) <= kResultTol, "branch probabilities sum to 1");
    }
    t.require(totient_set(6) == std::vector<std::int64_t>{1, 5}, "A(6)");
    t.require(totient_set(9) == std::vector<std::int64_t>{1, 2, 4, 5, 7, 8}, "A(9)");
    return {9, "regular-graph teleportation", t.pass,
            t.detail("(n,d,t) grid; coprime residue sets exact")};
}

double sparse_dense_transfer_gap(const TransferPlan& plan, const Vec& input) {
    const TransferReport rep = run_transfer(plan, input);
    const DenseSystem system = build_dense(plan);
    Vec coin2(plan.coin_dims()[1], Complex{});
    coin2[0] = 1.0;
    const auto dense =
        dense_trace(system, dense_product_state(system.layout, plan.start, input, coin2));
    double worst = 0.0;
    for (std::size_t i = 0; i < dense.size(); ++i)
        worst = std::max(worst, vec_max_diff(flatten(rep.trace[i], system.layout), dense[i]));
    return worst;
}

double sparse_dense_teleport_gap(const TeleportPlan& plan, const Vec& input) {
    const DenseSystem system = build_dense(plan);
    const auto dense = dense_trace(
        system, dense_product_state(system.layout, 0, input, plan.coin2_init));
    WalkState state = teleport_initial(plan, input);
    double worst = vec_max_diff(flatten(state, system.layout), dense[0]);
    const int dim = static_cast<int>(plan.coin_dims[0]);
    for (std::int64_t i = 1; i <= 2 * plan.half_steps; ++i) {
        state = apply_step(state, make_step(plan.arena, (i % 2 == 1) ? 0 : 1,
                                            CoinOp::identity(dim)));
        worst = std::max(worst, vec_max_diff(flatten(state, system.layout),
                                             dense[static_cast<std::size_t>(i)]));
    }
    return worst;
}

Matrix random_unitary(std::size_t d, Rng& rng) {
    std::vector<Vec> cols;
    while (cols.size() < d) {
        Vec v(d);
        for (Complex& c : v) c = rng.complex_gaussian();
        for (const Vec& b : cols) {
            const Complex ov = vec_inner(b, v);
            for (std::size_t i = 0; i < d; ++i) v[i] -= ov * b[i];
        }
        if (vec_norm(v) > 1e-6) cols.push_back(vec_normalized(std::move(v)));
    }
    Matrix m(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) m(i, j) = cols[j][i];
    return m;
}

CriterionResult engine_soundness() {
    Tally t;
    Rng rng(1001);
    double worst_gap = 0.0;
    int traces = 0;
    auto note_gap = [&](double gap, const std::string& what) {
        worst_gap = std::max(worst_gap, gap);
        ++traces;
        t.require(gap <= kOracleTol, "sparse/dense gap " + std::to_string(gap) + " at " + what);
    };

    for (std::int64_t x = -8; x <= 8; ++x)
        if (x != 0)
            note_gap(sparse_dense_transfer_gap(plan_line(x), random_state_vector(2, rng)), "line");
    for (std::int64_t d = 3; d <= 10; ++d)
        for (int method : {1, 2, 3, 4}) {
            if (method >= 3 && d % 2 != 0) continue;
            for (std::int64_t x = 1; x < d; ++x)
                note_gap(sparse_dense_transfer_gap(plan_cycle(d, x, method),
                                                   random_state_vector(2, rng)),
                         "cycle");
        }
    for (std::int64_t d = 2; d <= 8; ++d)
        for (std::int64_t x = 1; x < d; ++x)
            note_gap(sparse_dense_transfer_gap(plan_complete(d, x), random_state_vector(d, rng)),
                     "complete");
    for (const auto& [n, d] : std::vector<std::pair<std::int64_t, std::int64_t>>{
             {5, 3}, {7, 3}, {9, 3}, {7, 4}, {9, 4}, {11, 5}})
        for (std::int64_t x = 1; x < n; ++x)
            note_gap(sparse_dense_transfer_gap(plan_regular(n, d, x), random_state_vector(d, rng)),
                     "regular");

    for (std::int64_t n : {2, 4, 10})
        note_gap(sparse_dense_teleport_gap(line_teleport_plan(n), random_state_vector(2, rng)),
                 "teleport line");
    for (std::int64_t d : {4, 8, 12})
        note_gap(sparse_dense_teleport_gap(cycle_teleport_plan(d), random_state_vector(2, rng)),
                 "teleport cycle");
    for (std::int64_t d : {2, 3, 5, 7})
        for (std::int64_t tt = 1; tt <= 2 * d; ++tt)
            if (std::gcd(tt, d) == 1)
                note_gap(sparse_dense_teleport_gap(complete_teleport_plan(d, tt),
                                                   random_state_vector(d, rng)),
                         "teleport complete");
    for (const auto& [n, d, tt] : std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>{
             {5, 3, 1}, {9, 3, 2}, {7, 3, 1}, {11, 4, 3}})
        note_gap(sparse_dense_teleport_gap(regular_teleport_plan(n, d, tt),
                                           random_state_vector(d, rng)),
                 "teleport regular");

    // Commutation of steps on distinct coins, 100 random configurations per arena.
    double worst_comm = 0.0;
    for (const GraphSpec& arena : {GraphSpec::line(), GraphSpec::cycle(7),
                                   GraphSpec::complete_with_loops(4), GraphSpec::circulant(9, 4)}) {
        const int dim = static_cast<int>(arena.degree());
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<std::pair<BasisLabel, Complex>> terms;
            for (int k = 0; k < 6; ++k) {
                const std::int64_t pos = arena.finite()
                                             ? static_cast<std::int64_t>(rng.next_u64() %
                                                                         arena.vertices())
                                             : static_cast<std::int64_t>(rng.next_u64() % 21) - 10;
                terms.push_back({BasisLabel{pos,
                                            {static_cast<std::int32_t>(rng.next_u64() % dim),
                                             static_cast<std::int32_t>(rng.next_u64() % dim)}},
                                 rng.complex_gaussian()});
            }
            const WalkState state = make_state(arena, {dim, dim}, terms);
            auto coin_op = [&](int which) {
                switch (which % 3) {
                    case 0: return CoinOp::identity(dim);
                    case 1: return dim == 2 ? CoinOp::pauli_x() : CoinOp::cyclic_shift(dim);
                    default: return CoinOp::custom(random_unitary(dim, rng));
                }
            };
            const double gap = commutator_check(
                state, make_step(arena, 0, coin_op(static_cast<int>(rng.next_u64() % 3))),
                make_step(arena, 1, coin_op(static_cast<int>(rng.next_u64() % 3))));
            worst_comm = std::max(worst_comm, gap);
            t.require(gap <= kResultTol, "commutator " + std::to_string(gap));
        }
    }
    std::ostringstream detail;
    detail << traces << " protocol traces, max sparse/dense gap " << worst_gap
           << "; 400 commutator trials, max " << worst_comm << t.notes.str();
    return {10, "engine soundness: dense-oracle agreement and commutation", t.pass, detail.str()};
}

} // namespace

std::vector<CriterionResult> run_all_criteria() {
    return {
        line_transfer(),        periodicity(),
        cycle_transfer(),       complete_transfer(),
        regular_transfer(),     teleport_line_criterion(),
        teleport_cycle_criterion(), teleport_complete_criterion(),
        teleport_regular_criterion(), engine_soundness(),
    };
}

} // namespace coinwalk::verify
