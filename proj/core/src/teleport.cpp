#include "coinwalk/teleport.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "coinwalk/operators.hpp"
#include "coinwalk/rng.hpp"

namespace coinwalk {

namespace {

Complex unit_phase(double turns) {
    return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// 2x2 blocks used by the qubit protocols
Matrix pauli_x_matrix() {
    Matrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Matrix pauli_z_matrix() {
    Matrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Matrix qubit_correction(std::int64_t pos_mark, std::int64_t coin_mark) {
    if (pos_mark != 0 && coin_mark == pos_mark) return Matrix::identity(2);
    if (pos_mark != 0) return pauli_z_matrix();
    if (coin_mark == 1) return pauli_x_matrix();
    return pauli_z_matrix() * pauli_x_matrix(); // ZX
}

SubsystemVector singleton(std::int64_t value) { return {{value, Complex{1.0, 0.0}}}; }

SubsystemBasis fourier_basis(std::int64_t d) {
    SubsystemBasis basis;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::int64_t k = 0; k < d; ++k) {
        SubsystemVector v;
        for (std::int64_t m = 0; m < d; ++m)
            v[m] = scale * unit_phase(static_cast<double>(m * k) / static_cast<double>(d));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = m, new_r = floor_mod(a, m);
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
        std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
    }
    if (r != 1) throw CoprimalityError("no modular inverse: gcd != 1");
    return floor_mod(t, m);
}

} // namespace

TeleportPlan line_teleport_plan(std::int64_t n) {
    if (n <= 0 || n % 2 != 0) throw ParityError("line teleportation needs an even step count");
    TeleportPlan plan;
    plan.arena = GraphSpec::line();
    plan.coin_dims = {2, 2};
    plan.half_steps = n / 2;
    plan.coin2_init = {Complex{1.0, 0.0} / std::sqrt(2.0), Complex{1.0, 0.0} / std::sqrt(2.0)};

    const double r = 1.0 / std::sqrt(2.0);
    plan.position_basis = {singleton(0),
                           SubsystemVector{{-n, r}, {n, r}},
                           SubsystemVector{{-n, r}, {n, -r}}};
    plan.position_marks = {0, 1, -1};
    plan.coin1_basis = {SubsystemVector{{0, r}, {1, r}}, SubsystemVector{{0, r}, {1, -r}}};
    plan.coin1_marks = {1, -1};
    plan.correction = qubit_correction;
    return plan;
}

TeleportPlan cycle_teleport_plan(std::int64_t d) {
    // The evolved state has the teleportation form only when the d/2 steps
    // split evenly between the coins, i.e. d divisible by 4.
    if (d < 4 || d % 4 != 0)
        throw ParityError("cycle teleportation needs a vertex count divisible by 4");
    TeleportPlan plan;
    plan.arena = GraphSpec::cycle(d);
    plan.coin_dims = {2, 2};
    plan.half_steps = d / 4;
    plan.coin2_init = {Complex{1.0, 0.0} / std::sqrt(2.0), Complex{1.0, 0.0} / std::sqrt(2.0)};

    for (std::int64_t v = 0; v < d; ++v) {
        plan.position_basis.push_back(singleton(v));
        plan.position_marks.push_back(v == 0 ? 0 : (v == d / 2 ? 1 : -(v + 1)));
    }
    const double r = 1.0 / std::sqrt(2.0);
    plan.coin1_basis = {SubsystemVector{{0, r}, {1, r}}, SubsystemVector{{0, r}, {1, -r}}};
    plan.coin1_marks = {1, -1};
    plan.correction = [](std::int64_t pos_mark, std::int64_t coin_mark) {
        if (pos_mark != 0 && pos_mark != 1)
            throw ContractError("unreachable cycle position outcome");
        return qubit_correction(pos_mark, coin_mark);
    };
    return plan;
}

TeleportPlan complete_teleport_plan(std::int64_t d, std::int64_t t) {
    if (d < 2) throw ArenaError("complete-graph teleportation needs d >= 2");
    if (t < 1 || std::gcd(t, d) != 1)
        throw CoprimalityError("step pair count t must satisfy gcd(t,d) = 1");
    TeleportPlan plan;
    plan.arena = GraphSpec::complete_with_loops(d);
    plan.coin_dims = {static_cast<std::int32_t>(d), static_cast<std::int32_t>(d)};
    plan.half_steps = t;
    plan.coin2_init.assign(d, Complex{1.0, 0.0} / std::sqrt(static_cast<double>(d)));

    for (std::int64_t v = 0; v < d; ++v) {
        plan.position_basis.push_back(singleton(v));
        plan.position_marks.push_back(v); // outcome x_s is the vertex label
    }
    plan.coin1_basis = fourier_basis(d);
    for (std::int64_t k = 0; k < d; ++k) plan.coin1_marks.push_back(k);

    const std::int64_t t_inv = mod_inverse(t, d);
    plan.correction = [d, t_inv](std::int64_t x_s, std::int64_t t_tilde) {
        const std::int64_t s = floor_mod(t_inv * x_s, d);
        Matrix u(d, d);
        for (std::int64_t k = 0; k < d; ++k)
            u(k, floor_mod(s - k, d)) =
                unit_phase(static_cast<double>(k * t_tilde) / static_cast<double>(d));
        return u;
    };
    return plan;
}

TeleportPlan regular_teleport_plan(std::int64_t n, std::int64_t d, std::int64_t t) {
    if (d < 2) throw ArenaError("regular-graph teleportation needs degree >= 2");
    if (n < 2 * d - 1)
        throw ArenaError("regular-graph teleportation needs n >= 2d-1; smaller graphs cannot "
                         "teleport with probability 1");
    if (t < 1 || std::gcd(floor_mod(t, n), n) != 1)
        throw CoprimalityError("step pair count t must reduce into the coprime residue set A(n)");

    TeleportPlan plan;
    plan.arena = GraphSpec::circulant(n, d);
    plan.coin_dims = {static_cast<std::int32_t>(d), static_cast<std::int32_t>(d)};
    plan.half_steps = t;
    plan.coin2_init.assign(d, Complex{1.0, 0.0} / std::sqrt(static_cast<double>(d)));

    // Position support after 2t steps: A_i * v mod n for v = m + k in
    // 0..2d-2, listed in v order. Distinct because gcd(A_i, n) = 1.
    const std::int64_t a_i = floor_mod(t, n);
    std::vector<std::int64_t> vertex(2 * d - 1);
    for (std::int64_t v = 0; v < 2 * d - 1; ++v) vertex[v] = floor_mod(a_i * v, n);
    for (std::int64_t v = 0; v < 2 * d - 1; ++v)
        for (std::int64_t w = v + 1; w < 2 * d - 1; ++w)
            if (vertex[v] == vertex[w])
                throw ContractError("position support labels collide; schedule not admissible");

    const double r = 1.0 / std::sqrt(2.0);
    for (std::int64_t k = 0; k <= d - 2; ++k) {
        plan.position_basis.push_back(SubsystemVector{{vertex[k], r}, {vertex[d + k], r}});
        plan.position_marks.push_back(k);
        plan.position_basis.push_back(SubsystemVector{{vertex[k], r}, {vertex[d + k], -r}});
        plan.position_marks.push_back(d + k);
    }
    plan.position_basis.push_back(singleton(vertex[d - 1]));
    plan.position_marks.push_back(d - 1);

    plan.coin1_basis = fourier_basis(d);
    for (std::int64_t k = 0; k < d; ++k) plan.coin1_marks.push_back(k);

    plan.correction = [d](std::int64_t pos_mark, std::int64_t t_tilde) {
        // pos_mark in 0..d-2 -> paired "+" outcome k; d..2d-2 -> paired "-"
        // outcome k+d; d-1 -> the singleton. The correction permutes
        // |k-m mod d> back to |m| with phases, the "-" outcome flips the
        // sign of the wrapped half.
        std::int64_t k = pos_mark;
        double sign = 1.0;
        if (pos_mark >= d) {
            k = pos_mark - d;
            sign = -1.0;
        }
        Matrix u(d, d);
        for (std::int64_t m = 0; m < d; ++m) {
            const Complex phase =
                unit_phase(static_cast<double>(m * t_tilde) / static_cast<double>(d));
            u(m, floor_mod(k - m, d)) = (m <= k ? 1.0 : sign) * phase;
        }
        return u;
    };
    return plan;
}

WalkState teleport_initial(const TeleportPlan& plan, const Vec& input) {
    if (input.size() != static_cast<std::size_t>(plan.coin_dims[0]))
        throw SpaceMismatchError("payload dimension " + std::to_string(input.size()) +
                                 " does not match coin 1 dimension " +
                                 std::to_string(plan.coin_dims[0]));
    if (std::abs(vec_norm(input) - 1.0) > 1e-6)
        throw ContractError("payload state must be normalized");
    std::vector<std::pair<BasisLabel, Complex>> terms;
    for (std::size_t c1 = 0; c1 < input.size(); ++c1) {
        if (input[c1] == Complex{}) continue;
        for (std::size_t c2 = 0; c2 < plan.coin2_init.size(); ++c2) {
            if (plan.coin2_init[c2] == Complex{}) continue;
            terms.push_back({BasisLabel{0, {static_cast<std::int32_t>(c1),
                                            static_cast<std::int32_t>(c2)}},
                             input[c1] * plan.coin2_init[c2]});
        }
    }
    return make_state(plan.arena, plan.coin_dims, terms);
}

namespace {

// The doubly-collapsed state factors as |b_pos> ⊗ |b_c1> ⊗ |chi>; pull out
// chi by contracting against the two measured basis vectors.
Vec extract_coin2(const WalkState& post, const SubsystemVector& pos_vec,
                  const SubsystemVector& coin1_vec) {
    Vec chi(post.coin_dims[1], Complex{});
    for (const auto& [label, amp] : post.amps) {
        const auto pit = pos_vec.find(label.position);
        const auto cit = coin1_vec.find(label.coins[0]);
        if (pit == pos_vec.end() || cit == coin1_vec.end()) continue;
        chi[label.coins[1]] += std::conj(pit->second) * std::conj(cit->second) * amp;
    }
    const double n = vec_norm(chi);
    if (std::abs(n - 1.0) > 1e-9)
        throw ContractError("collapsed state does not factor over the measured subsystems");
    for (Complex& c : chi) c /= n;
    return chi;
}

} // namespace

std::vector<MeasurementBranch> run_teleport(const TeleportPlan& plan, const Vec& input) {
    WalkState state = teleport_initial(plan, input);
    const int dim = static_cast<int>(plan.coin_dims[0]);
    for (std::int64_t i = 1; i <= 2 * plan.half_steps; ++i) {
        const int active = (i % 2 == 1) ? 0 : 1;
        state = apply_step(state, make_step(plan.arena, active, CoinOp::identity(dim)));
    }

    std::vector<MeasurementBranch> branches;
    for (const ProjectionOutcome& pos_out :
         project_subsystem(state, Subsystem::position(), plan.position_basis)) {
        for (const ProjectionOutcome& coin_out :
             project_subsystem(pos_out.post, Subsystem::coin_register(0), plan.coin1_basis)) {
            MeasurementBranch branch;
            branch.position_outcome = plan.position_marks[pos_out.basis_index];
            branch.coin1_outcome = plan.coin1_marks[coin_out.basis_index];
            branch.probability = pos_out.probability * coin_out.probability;
            branch.post_coin2 = extract_coin2(coin_out.post, plan.position_basis[pos_out.basis_index],
                                              plan.coin1_basis[coin_out.basis_index]);
            branch.correction = plan.correction(branch.position_outcome, branch.coin1_outcome);
            if (unitarity_defect(branch.correction) > kResultTol)
                throw UnitarityError("branch correction is not unitary");
            branch.corrected = branch.correction.apply(branch.post_coin2);
            branches.push_back(std::move(branch));
        }
    }
    return branches;
}

std::vector<MeasurementBranch> teleport_line(std::int64_t n, const Vec& input) {
    return run_teleport(line_teleport_plan(n), input);
}

std::vector<MeasurementBranch> teleport_cycle(std::int64_t d, const Vec& input) {
    return run_teleport(cycle_teleport_plan(d), input);
}

std::vector<MeasurementBranch> teleport_complete(std::int64_t d, std::int64_t t, const Vec& input) {
    return run_teleport(complete_teleport_plan(d, t), input);
}

std::vector<MeasurementBranch> teleport_regular(std::int64_t n, std::int64_t d, std::int64_t t,
                                                const Vec& input) {
    return run_teleport(regular_teleport_plan(n, d, t), input);
}

std::vector<std::int64_t> totient_set(std::int64_t n) {
    if (n < 1) throw ContractError("totient set needs n >= 1");
    std::vector<std::int64_t> out;
    for (std::int64_t x = 1; x <= n; ++x)
        if (std::gcd(x, n) == 1) out.push_back(x);
    return out;
}

MeasurementBranch sample_branch(const std::vector<MeasurementBranch>& branches,
                                std::uint64_t seed) {
    if (branches.empty()) throw ContractError("cannot sample from an empty branch list");
    Rng rng(seed);
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (const MeasurementBranch& b : branches) {
        cumulative += b.probability;
        if (u < cumulative) return b;
    }
    return branches.back();
}

} // namespace coinwalk
