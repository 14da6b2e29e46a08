#include "coinwalk/oracle.hpp"

#include <cmath>
#include <numbers>

#include "coinwalk/rng.hpp"

namespace coinwalk {

std::size_t DenseLayout::dimension() const {
    std::size_t dim = static_cast<std::size_t>(pos_count);
    for (std::int32_t d : coin_dims) dim *= static_cast<std::size_t>(d);
    return dim;
}

std::size_t DenseLayout::index_of(const BasisLabel& label) const {
    const std::int64_t p = label.position - pos_min;
    if (p < 0 || p >= pos_count) throw LabelError("position outside the dense window");
    std::size_t idx = static_cast<std::size_t>(p);
    for (std::size_t m = 0; m < coin_dims.size(); ++m)
        idx = idx * static_cast<std::size_t>(coin_dims[m]) + static_cast<std::size_t>(label.coins[m]);
    return idx;
}

BasisLabel DenseLayout::label_of(std::size_t index) const {
    BasisLabel label;
    label.coins.resize(coin_dims.size());
    for (std::size_t m = coin_dims.size(); m-- > 0;) {
        const auto d = static_cast<std::size_t>(coin_dims[m]);
        label.coins[m] = static_cast<std::int32_t>(index % d);
        index /= d;
    }
    label.position = static_cast<std::int64_t>(index) + pos_min;
    return label;
}

namespace {

Complex unit_phase(double turns) {
    return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// Coin matrices written out from their definitions; the Custom payload is
// caller data and is taken as-is.
Matrix oracle_coin_matrix(const CoinOp& op) {
    const int d = op.dim();
    Matrix m(d, d);
    switch (op.kind()) {
        case CoinKind::Identity:
            for (int j = 0; j < d; ++j) m(j, j) = 1.0;
            break;
        case CoinKind::PauliX:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case CoinKind::CyclicShift:
            for (int j = 0; j < d; ++j) m((j + 1) % d, j) = 1.0;
            break;
        case CoinKind::CyclicShiftInverse:
            for (int j = 0; j < d; ++j) m((j + d - 1) % d, j) = 1.0;
            break;
        case CoinKind::Fourier: {
            const double scale = 1.0 / std::sqrt(static_cast<double>(d));
            for (int k = 0; k < d; ++k)
                for (int row = 0; row < d; ++row)
                    m(row, k) = scale * unit_phase(static_cast<double>(row) * k / d);
            break;
        }
        case CoinKind::Custom:
            m = coin_matrix(op);
            break;
    }
    return m;
}

// Position update rules straight from the shift-operator sums. The line
// window wraps cyclically; a walk can never reach the padding rows.
std::int64_t oracle_shift_index(const GraphSpec& arena, std::int64_t pos_index,
                                std::int64_t pos_count, std::int32_t coin_value) {
    switch (arena.kind()) {
        case GraphKind::Line:
            return coin_value == 0 ? floor_mod(pos_index + 1, pos_count)
                                   : floor_mod(pos_index - 1, pos_count);
        case GraphKind::Cycle:
            return coin_value == 0 ? floor_mod(pos_index + 1, arena.vertices())
                                   : floor_mod(pos_index - 1, arena.vertices());
        case GraphKind::CompleteWithLoops:
        case GraphKind::Circulant:
            return floor_mod(pos_index + coin_value, arena.vertices());
    }
    return pos_index;
}

} // namespace

DenseSystem build_dense(const GraphSpec& arena, const std::vector<std::int32_t>& coin_dims,
                        const std::vector<StepSpec>& steps, std::int64_t start) {
    DenseSystem system;
    system.layout.arena = arena;
    system.layout.coin_dims = coin_dims;
    if (arena.finite()) {
        system.layout.pos_min = 0;
        system.layout.pos_count = arena.vertices();
    } else {
        const auto k = static_cast<std::int64_t>(steps.size());
        system.layout.pos_min = start - k - 1;
        system.layout.pos_count = 2 * k + 3;
    }
    if (system.layout.dimension() > kDenseDimensionGuard)
        throw SizeError("dense dimension " + std::to_string(system.layout.dimension()) +
                        " exceeds the guard rail");

    const std::size_t dim = system.layout.dimension();
    for (const StepSpec& step : steps) {
        const Matrix coin = oracle_coin_matrix(step.coin_op);
        Matrix m(dim, dim);
        for (std::size_t col = 0; col < dim; ++col) {
            const BasisLabel label = system.layout.label_of(col);
            const std::int64_t pos_index = label.position - system.layout.pos_min;
            const auto c = static_cast<std::size_t>(label.coins[step.active_coin]);
            for (std::size_t row = 0; row < coin.rows(); ++row) {
                const Complex coeff = coin(row, c);
                if (coeff == Complex{}) continue;
                BasisLabel next = label;
                next.coins[step.active_coin] = static_cast<std::int32_t>(row);
                next.position = system.layout.pos_min +
                                oracle_shift_index(arena, pos_index, system.layout.pos_count,
                                                   next.coins[step.active_coin]);
                m(system.layout.index_of(next), col) += coeff;
            }
        }
        system.step_matrices.push_back(std::move(m));
    }
    return system;
}

DenseSystem build_dense(const TransferPlan& plan) {
    return build_dense(plan.arena, plan.coin_dims(), plan.steps, plan.start);
}

DenseSystem build_dense(const TeleportPlan& plan) {
    std::vector<StepSpec> steps;
    const int dim = static_cast<int>(plan.coin_dims[0]);
    for (std::int64_t i = 1; i <= 2 * plan.half_steps; ++i)
        steps.push_back(make_step(plan.arena, (i % 2 == 1) ? 0 : 1, CoinOp::identity(dim)));
    return build_dense(plan.arena, plan.coin_dims, steps, 0);
}

Vec dense_product_state(const DenseLayout& layout, std::int64_t position, const Vec& coin1,
                        const Vec& coin2) {
    Vec v(layout.dimension(), Complex{});
    for (std::size_t c1 = 0; c1 < coin1.size(); ++c1)
        for (std::size_t c2 = 0; c2 < coin2.size(); ++c2) {
            const Complex amp = coin1[c1] * coin2[c2];
            if (amp == Complex{}) continue;
            v[layout.index_of(BasisLabel{position, {static_cast<std::int32_t>(c1),
                                                    static_cast<std::int32_t>(c2)}})] = amp;
        }
    const double n = vec_norm(v);
    if (n < 1e-12) throw ZeroStateError("zero product state");
    for (Complex& c : v) c /= n;
    return v;
}

std::vector<Vec> dense_trace(const DenseSystem& system, Vec initial) {
    std::vector<Vec> trace;
    trace.reserve(system.step_matrices.size() + 1);
    trace.push_back(std::move(initial));
    for (const Matrix& m : system.step_matrices) trace.push_back(m.apply(trace.back()));
    return trace;
}

Vec dense_evolve(const DenseSystem& system, Vec initial) {
    for (const Matrix& m : system.step_matrices) initial = m.apply(initial);
    return initial;
}

Vec dense_apply_coins(const DenseLayout& layout, const Matrix& u1, const Matrix& u2, const Vec& v) {
    Vec out(v.size(), Complex{});
    for (std::size_t col = 0; col < v.size(); ++col) {
        if (v[col] == Complex{}) continue;
        const BasisLabel label = layout.label_of(col);
        for (std::size_t r1 = 0; r1 < u1.rows(); ++r1) {
            const Complex a1 = u1(r1, label.coins[0]);
            if (a1 == Complex{}) continue;
            for (std::size_t r2 = 0; r2 < u2.rows(); ++r2) {
                const Complex a2 = u2(r2, label.coins[1]);
                if (a2 == Complex{}) continue;
                BasisLabel next = label;
                next.coins[0] = static_cast<std::int32_t>(r1);
                next.coins[1] = static_cast<std::int32_t>(r2);
                out[layout.index_of(next)] += a1 * a2 * v[col];
            }
        }
    }
    return out;
}

Vec flatten(const WalkState& state, const DenseLayout& layout) {
    Vec v(layout.dimension(), Complex{});
    for (const auto& [label, amp] : state.amps) v[layout.index_of(label)] = amp;
    return v;
}

WalkState unflatten(const Vec& v, const DenseLayout& layout) {
    WalkState state{layout.arena, layout.coin_dims, {}};
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) >= kPruneThreshold) state.amps[layout.label_of(i)] = v[i];
    return state;
}

namespace {

struct Factorization {
    Vec v1, v2;
};

// Rank-1 split of the coin1 x coin2 amplitude matrix at a single position.
std::optional<Factorization> factor_product(const WalkState& state) {
    if (state.num_coins() != 2 || state.amps.empty()) return std::nullopt;
    const std::int64_t pos = state.amps.begin()->first.position;
    for (const auto& [label, amp] : state.amps)
        if (label.position != pos) return std::nullopt;

    const std::size_t d1 = state.coin_dims[0], d2 = state.coin_dims[1];
    Matrix a(d1, d2);
    for (const auto& [label, amp] : state.amps) a(label.coins[0], label.coins[1]) = amp;

    std::size_t bi = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            if (std::abs(a(i, j)) > best) {
                best = std::abs(a(i, j));
                bi = i;
            }
    if (best == 0.0) return std::nullopt;

    Vec v2(d2);
    for (std::size_t j = 0; j < d2; ++j) v2[j] = a(bi, j);
    v2 = vec_normalized(std::move(v2));
    Vec v1(d1);
    for (std::size_t i = 0; i < d1; ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < d2; ++j) acc += a(i, j) * std::conj(v2[j]);
        v1[i] = acc;
    }

    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            if (std::abs(a(i, j) - v1[i] * v2[j]) > 1e-9) return std::nullopt;
    return Factorization{std::move(v1), std::move(v2)};
}

std::vector<std::pair<std::string, Matrix>> recovery_candidates(std::size_t d) {
    std::vector<std::pair<std::string, Matrix>> out;
    out.emplace_back("I", Matrix::identity(d));
    for (std::size_t p = 1; p < d; ++p) {
        Matrix m(d, d);
        for (std::size_t j = 0; j < d; ++j) m((j + p) % d, j) = 1.0;
        std::string name = d == 2 ? "X" : "X_" + std::to_string(d);
        if (p > 1) name += "^" + std::to_string(p);
        if (d > 2 && p == d - 1) name = "X_" + std::to_string(d) + "^-1";
        out.emplace_back(name, std::move(m));
    }
    for (std::size_t q = 1; q < d; ++q) {
        Matrix m(d, d);
        for (std::size_t j = 0; j < d; ++j)
            m(j, j) = unit_phase(static_cast<double>(q * j) / static_cast<double>(d));
        std::string name = d == 2 ? "Z" : "Z_" + std::to_string(d);
        if (q > 1) name += "^" + std::to_string(q);
        out.emplace_back(name, std::move(m));
    }
    return out;
}

// Unitary with U v = target exactly: match Gram-Schmidt completions.
Matrix general_alignment(const Vec& v, const Vec& target) {
    const std::size_t d = v.size();
    auto complete = [d](const Vec& first) {
        std::vector<Vec> basis{first};
        for (std::size_t k = 0; k < d && basis.size() < d; ++k) {
            Vec e(d, Complex{});
            e[k] = 1.0;
            for (const Vec& b : basis) {
                const Complex ov = vec_inner(b, e);
                for (std::size_t i = 0; i < d; ++i) e[i] -= ov * b[i];
            }
            if (vec_norm(e) > 1e-8) basis.push_back(vec_normalized(std::move(e)));
        }
        return basis;
    };
    const auto bv = complete(vec_normalized(v));
    const auto bt = complete(vec_normalized(target));
    Matrix u(d, d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) u(i, j) += bt[k][i] * std::conj(bv[k][j]);
    return u;
}

std::pair<std::string, Matrix> align_coin(const Vec& v, const Vec& target) {
    for (const auto& [name, m] : recovery_candidates(v.size())) {
        const Vec w = m.apply(v);
        if (std::abs(std::abs(vec_inner(target, w)) - 1.0) <= 1e-9) return {name, m};
    }
    return {"general", general_alignment(v, target)};
}

} // namespace

std::optional<RecoverySolution> solve_recovery(const WalkState& final_state, const Vec& target_coin1,
                                               const Vec& target_coin2) {
    const auto factored = factor_product(final_state);
    if (!factored) return std::nullopt;
    auto [n1, u1] = align_coin(factored->v1, target_coin1);
    auto [n2, u2] = align_coin(factored->v2, target_coin2);
    return RecoverySolution{std::move(u1), std::move(u2), std::move(n1), std::move(n2)};
}

namespace {

Vec probe_input(std::size_t dim) {
    Rng rng(0xC01Au);
    return random_state_vector(dim, rng);
}

} // namespace

std::optional<RecoverySolution> solve_recovery_for_plan(const TransferPlan& plan) {
    const DenseSystem system = build_dense(plan);
    const auto dims = plan.coin_dims();
    const Vec input = probe_input(static_cast<std::size_t>(dims[0]));
    Vec coin2(dims[1], Complex{});
    coin2[0] = 1.0;
    const Vec final_vec =
        dense_evolve(system, dense_product_state(system.layout, plan.start, input, coin2));
    return solve_recovery(unflatten(final_vec, system.layout), input, coin2);
}

CertificationRecord certify_schedule(const TransferPlan& plan, int trials, std::uint64_t seed) {
    if (trials < 1) throw ContractError("certification needs at least one trial");
    const DenseSystem system = build_dense(plan);
    const auto dims = plan.coin_dims();
    const auto d1 = static_cast<std::size_t>(dims[0]);
    Vec coin2(dims[1], Complex{});
    coin2[0] = 1.0;

    std::vector<Vec> inputs;
    for (std::size_t k = 0; k < d1; ++k) {
        Vec e(d1, Complex{});
        e[k] = 1.0;
        inputs.push_back(std::move(e));
    }
    Rng rng(seed);
    for (int i = 0; i < trials; ++i) inputs.push_back(random_state_vector(d1, rng));

    const Matrix u1 = coin_matrix(plan.recovery_coin1);
    const Matrix u2 = coin_matrix(plan.recovery_coin2);

    CertificationRecord record;
    record.pass = true;
    record.min_fidelity = 1.0;
    for (const Vec& input : inputs) {
        const Vec final_vec =
            dense_evolve(system, dense_product_state(system.layout, plan.start, input, coin2));
        const Vec corrected = dense_apply_coins(system.layout, u1, u2, final_vec);
        const Vec target = dense_product_state(system.layout, plan.target, input, coin2);
        const double fid = std::norm(vec_inner(target, corrected));
        record.min_fidelity = std::min(record.min_fidelity, fid);
        ++record.inputs_checked;
        if (fid < 1.0 - kResultTol && record.pass) {
            record.pass = false;
            record.counterexample = input;
        }
    }
    record.recovery = solve_recovery_for_plan(plan);
    return record;
}

TransferPlan corrupt_schedule(TransferPlan plan) {
    for (std::size_t i = plan.steps.size(); i-- > 0;) {
        if (plan.steps[i].coin_op.is_identity()) continue;
        const CoinOp op = plan.steps[i].coin_op;
        std::size_t j = i >= 2 ? i - 2 : i + 2;
        if (j >= plan.steps.size() || !plan.steps[j].coin_op.is_identity()) j = i + 2;
        if (j >= plan.steps.size()) return plan; // nowhere to move; leave as-is
        plan.steps[i].coin_op = CoinOp::identity(op.dim());
        plan.steps[j].coin_op = op;
        return plan;
    }
    // all-identity schedule: inject a flip
    if (plan.steps.size() >= 2) {
        const int dim = plan.steps[1].coin_op.dim();
        plan.steps[1].coin_op = dim == 2 ? CoinOp::pauli_x() : CoinOp::cyclic_shift(dim);
    }
    return plan;
}

} // namespace coinwalk
