#include "coinwalk/operators.hpp"

#include <cmath>
#include <numbers>

namespace coinwalk {

namespace {

Complex unit_phase(double turns) {
    return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace

CoinOp CoinOp::identity(int dim) {
    if (dim < 1) throw UnitarityError("coin dimension must be positive");
    return {CoinKind::Identity, dim};
}

CoinOp CoinOp::pauli_x() { return {CoinKind::PauliX, 2}; }

CoinOp CoinOp::cyclic_shift(int dim) {
    if (dim < 1) throw UnitarityError("coin dimension must be positive");
    return {CoinKind::CyclicShift, dim};
}

CoinOp CoinOp::cyclic_shift_inverse(int dim) {
    if (dim < 1) throw UnitarityError("coin dimension must be positive");
    return {CoinKind::CyclicShiftInverse, dim};
}

CoinOp CoinOp::fourier(int dim) {
    if (dim < 1) throw UnitarityError("coin dimension must be positive");
    return {CoinKind::Fourier, dim};
}

CoinOp CoinOp::custom(Matrix m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw UnitarityError("custom coin must be square");
    if (unitarity_defect(m) > kResultTol) throw UnitarityError("custom coin is not unitary");
    CoinOp op{CoinKind::Custom, static_cast<int>(m.rows())};
    op.custom_ = std::move(m);
    return op;
}

std::string CoinOp::name() const {
    switch (kind_) {
        case CoinKind::Identity: return "I";
        case CoinKind::PauliX: return "X";
        case CoinKind::CyclicShift: return dim_ == 2 ? "X" : "X_" + std::to_string(dim_);
        case CoinKind::CyclicShiftInverse:
            return dim_ == 2 ? "X" : "X_" + std::to_string(dim_) + "^-1";
        case CoinKind::Fourier: return "F_" + std::to_string(dim_);
        case CoinKind::Custom: return "custom";
    }
    return "?";
}

std::vector<std::pair<int, Complex>> CoinOp::column(int col) const {
    switch (kind_) {
        case CoinKind::Identity: return {{col, Complex{1.0, 0.0}}};
        case CoinKind::PauliX: return {{1 - col, Complex{1.0, 0.0}}};
        case CoinKind::CyclicShift: return {{(col + 1) % dim_, Complex{1.0, 0.0}}};
        case CoinKind::CyclicShiftInverse: return {{(col + dim_ - 1) % dim_, Complex{1.0, 0.0}}};
        case CoinKind::Fourier: {
            std::vector<std::pair<int, Complex>> out;
            out.reserve(dim_);
            const double scale = 1.0 / std::sqrt(static_cast<double>(dim_));
            for (int m = 0; m < dim_; ++m)
                out.emplace_back(m, scale * unit_phase(static_cast<double>(m) * col / dim_));
            return out;
        }
        case CoinKind::Custom: {
            std::vector<std::pair<int, Complex>> out;
            for (int m = 0; m < dim_; ++m) {
                const Complex c = custom_(m, col);
                if (c != Complex{}) out.emplace_back(m, c);
            }
            return out;
        }
    }
    return {};
}

bool operator==(const CoinOp& a, const CoinOp& b) {
    if (a.kind_ != b.kind_ || a.dim_ != b.dim_) return false;
    if (a.kind_ != CoinKind::Custom) return true;
    for (std::size_t i = 0; i < a.custom_.rows(); ++i)
        for (std::size_t j = 0; j < a.custom_.cols(); ++j)
            if (a.custom_(i, j) != b.custom_(i, j)) return false;
    return true;
}

Matrix coin_matrix(const CoinOp& op) {
    Matrix m(op.dim(), op.dim());
    for (int col = 0; col < op.dim(); ++col)
        for (const auto& [row, coeff] : op.column(col)) m(row, col) = coeff;
    return m;
}

std::int64_t ShiftOp::apply(std::int64_t position, std::int32_t coin_value) const {
    switch (arena.kind()) {
        case GraphKind::Line:
            return coin_value == 0 ? position + 1 : position - 1;
        case GraphKind::Cycle:
            return coin_value == 0 ? floor_mod(position + 1, arena.vertices())
                                   : floor_mod(position - 1, arena.vertices());
        case GraphKind::CompleteWithLoops:
        case GraphKind::Circulant:
            return floor_mod(position + coin_value, arena.vertices());
    }
    return position;
}

std::int64_t ShiftOp::unapply(std::int64_t position, std::int32_t coin_value) const {
    switch (arena.kind()) {
        case GraphKind::Line:
            return coin_value == 0 ? position - 1 : position + 1;
        case GraphKind::Cycle:
            return coin_value == 0 ? floor_mod(position - 1, arena.vertices())
                                   : floor_mod(position + 1, arena.vertices());
        case GraphKind::CompleteWithLoops:
        case GraphKind::Circulant:
            return floor_mod(position - coin_value, arena.vertices());
    }
    return position;
}

ShiftOp shift_for(const GraphSpec& arena) { return ShiftOp{arena}; }

StepSpec make_step(const GraphSpec& arena, int active_coin, CoinOp coin_op) {
    return StepSpec{active_coin, std::move(coin_op), shift_for(arena)};
}

namespace {

void validate_step(const WalkState& state, const StepSpec& step) {
    if (state.arena != step.shift.arena)
        throw SpaceMismatchError("step built for " + step.shift.arena.name() + ", state lives on " +
                                 state.arena.name());
    if (step.active_coin < 0 || static_cast<std::size_t>(step.active_coin) >= state.num_coins())
        throw SpaceMismatchError("active coin " + std::to_string(step.active_coin) +
                                 " out of range");
    const std::int32_t dim = state.coin_dims[step.active_coin];
    if (step.coin_op.dim() != dim)
        throw SpaceMismatchError("coin operator dimension " + std::to_string(step.coin_op.dim()) +
                                 " does not match coin dimension " + std::to_string(dim));
    const GraphKind kind = state.arena.kind();
    const std::int64_t rule_dim = (kind == GraphKind::Line || kind == GraphKind::Cycle)
                                      ? 2
                                      : state.arena.degree();
    if (dim != rule_dim)
        throw SpaceMismatchError("arena " + state.arena.name() + " conditions on a " +
                                 std::to_string(rule_dim) + "-dimensional coin");
}

void prune(WalkState& state) {
    for (auto it = state.amps.begin(); it != state.amps.end();) {
        if (std::abs(it->second) < kPruneThreshold)
            it = state.amps.erase(it);
        else
            ++it;
    }
}

} // namespace

WalkState apply_step(const WalkState& state, const StepSpec& step) {
    validate_step(state, step);
    WalkState out{state.arena, state.coin_dims, {}};
    for (const auto& [label, amp] : state.amps) {
        for (const auto& [row, coeff] : step.coin_op.column(label.coins[step.active_coin])) {
            BasisLabel next = label;
            next.coins[step.active_coin] = static_cast<std::int32_t>(row);
            next.position = step.shift.apply(label.position, next.coins[step.active_coin]);
            out.amps[next] += coeff * amp;
        }
    }
    prune(out);
    return out;
}

WalkState apply_coin(const WalkState& state, int coin_index, const CoinOp& op) {
    if (coin_index < 0 || static_cast<std::size_t>(coin_index) >= state.num_coins())
        throw SpaceMismatchError("coin index " + std::to_string(coin_index) + " out of range");
    if (op.dim() != state.coin_dims[coin_index])
        throw SpaceMismatchError("coin operator dimension does not match register");
    if (op.is_identity()) return state;
    WalkState out{state.arena, state.coin_dims, {}};
    for (const auto& [label, amp] : state.amps) {
        for (const auto& [row, coeff] : op.column(label.coins[coin_index])) {
            BasisLabel next = label;
            next.coins[coin_index] = static_cast<std::int32_t>(row);
            out.amps[next] += coeff * amp;
        }
    }
    prune(out);
    return out;
}

double commutator_check(const WalkState& state, const StepSpec& s1, const StepSpec& s2) {
    if (s1.active_coin == s2.active_coin)
        throw ContractError("commutation is only claimed for steps on distinct coins");
    const WalkState ab = apply_step(apply_step(state, s1), s2);
    const WalkState ba = apply_step(apply_step(state, s2), s1);
    double sum = 0.0;
    for (const auto& [label, amp] : ab.amps) sum += std::norm(amp - ba.amplitude(label));
    for (const auto& [label, amp] : ba.amps)
        if (!ab.amps.contains(label)) sum += std::norm(amp);
    return std::sqrt(sum);
}

} // namespace coinwalk
