#include "coinwalk/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace coinwalk {

std::string GraphSpec::name() const {
    switch (kind_) {
        case GraphKind::Line: return "line";
        case GraphKind::Cycle: return "cycle(" + std::to_string(vertices_) + ")";
        case GraphKind::CompleteWithLoops:
            return "complete-with-loops(" + std::to_string(vertices_) + ")";
        case GraphKind::Circulant:
            return "circulant(" + std::to_string(vertices_) + "," + std::to_string(degree_) + ")";
    }
    return "?";
}

double WalkState::norm() const {
    double s = 0.0;
    for (const auto& [label, amp] : amps) s += std::norm(amp);
    return std::sqrt(s);
}

Complex WalkState::amplitude(const BasisLabel& label) const {
    const auto it = amps.find(label);
    return it == amps.end() ? Complex{} : it->second;
}

void validate_label(const GraphSpec& arena, const std::vector<std::int32_t>& coin_dims,
                    const BasisLabel& label) {
    if (label.coins.size() != coin_dims.size())
        throw LabelError("label has " + std::to_string(label.coins.size()) + " coins, state has " +
                         std::to_string(coin_dims.size()));
    for (std::size_t m = 0; m < coin_dims.size(); ++m) {
        if (label.coins[m] < 0 || label.coins[m] >= coin_dims[m])
            throw LabelError("coin " + std::to_string(m) + " value " +
                             std::to_string(label.coins[m]) + " outside 0.." +
                             std::to_string(coin_dims[m] - 1));
    }
    if (arena.finite() && (label.position < 0 || label.position >= arena.vertices()))
        throw LabelError("position " + std::to_string(label.position) + " outside 0.." +
                         std::to_string(arena.vertices() - 1));
}

namespace {

void prune(WalkState& state) {
    for (auto it = state.amps.begin(); it != state.amps.end();) {
        if (std::abs(it->second) < kPruneThreshold)
            it = state.amps.erase(it);
        else
            ++it;
    }
}

void check_same_space(const WalkState& u, const WalkState& v) {
    if (u.arena != v.arena || u.coin_dims != v.coin_dims)
        throw SpaceMismatchError("states live in different walker/coin spaces");
}

} // namespace

WalkState make_state(const GraphSpec& arena, std::vector<std::int32_t> coin_dims,
                     const std::vector<std::pair<BasisLabel, Complex>>& terms) {
    if (terms.empty()) throw ZeroStateError("no terms given");
    for (std::int32_t d : coin_dims)
        if (d < 1) throw LabelError("coin dimensions must be positive");

    WalkState state{arena, std::move(coin_dims), {}};
    for (const auto& [label, amp] : terms) {
        validate_label(state.arena, state.coin_dims, label);
        state.amps[label] += amp;
    }
    const double n = state.norm();
    if (n < 1e-12) throw ZeroStateError("terms sum to the zero vector");
    for (auto& [label, amp] : state.amps) amp /= n;
    prune(state);
    return state;
}

Complex inner_product(const WalkState& u, const WalkState& v) {
    check_same_space(u, v);
    const WalkState& small = u.amps.size() <= v.amps.size() ? u : v;
    const WalkState& big = (&small == &u) ? v : u;
    Complex acc{};
    for (const auto& [label, amp] : small.amps) {
        const auto it = big.amps.find(label);
        if (it == big.amps.end()) continue;
        // <u|v> regardless of which map we iterate
        if (&small == &u)
            acc += std::conj(amp) * it->second;
        else
            acc += std::conj(it->second) * amp;
    }
    return acc;
}

double fidelity_up_to_phase(const WalkState& u, const WalkState& v) {
    return std::norm(inner_product(u, v));
}

double max_amplitude_diff(const WalkState& u, const WalkState& v) {
    check_same_space(u, v);
    double worst = 0.0;
    for (const auto& [label, amp] : u.amps) worst = std::max(worst, std::abs(amp - v.amplitude(label)));
    for (const auto& [label, amp] : v.amps) worst = std::max(worst, std::abs(amp - u.amplitude(label)));
    return worst;
}

namespace {

std::int64_t subsystem_value(const BasisLabel& label, Subsystem sub) {
    return sub.kind == Subsystem::Kind::Position ? label.position : label.coins[sub.coin];
}

BasisLabel with_subsystem_value(BasisLabel label, Subsystem sub, std::int64_t value) {
    if (sub.kind == Subsystem::Kind::Position)
        label.position = value;
    else
        label.coins[sub.coin] = static_cast<std::int32_t>(value);
    return label;
}

void validate_basis(const WalkState& state, Subsystem sub, const SubsystemBasis& basis) {
    if (basis.empty()) throw BasisError("empty measurement basis");
    if (sub.kind == Subsystem::Kind::Coin &&
        (sub.coin < 0 || static_cast<std::size_t>(sub.coin) >= state.num_coins()))
        throw BasisError("coin index " + std::to_string(sub.coin) + " out of range");

    for (const auto& vec : basis) {
        if (vec.empty()) throw BasisError("basis vector with no components");
        for (const auto& [value, coef] : vec) {
            (void)coef;
            if (sub.kind == Subsystem::Kind::Position) {
                if (state.arena.finite() && (value < 0 || value >= state.arena.vertices()))
                    throw BasisError("basis position " + std::to_string(value) + " outside arena");
            } else if (value < 0 || value >= state.coin_dims[sub.coin]) {
                throw BasisError("basis coin value " + std::to_string(value) + " outside dimension");
            }
        }
    }

    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            Complex overlap{};
            for (const auto& [value, coef] : basis[i]) {
                const auto it = basis[j].find(value);
                if (it != basis[j].end()) overlap += std::conj(coef) * it->second;
            }
            const Complex want = (i == j) ? Complex{1.0, 0.0} : Complex{};
            if (std::abs(overlap - want) > kResultTol)
                throw BasisError("measurement basis is not orthonormal (vectors " +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
        }
}

} // namespace

std::vector<ProjectionOutcome> project_subsystem(const WalkState& state, Subsystem sub,
                                                 const SubsystemBasis& basis) {
    validate_basis(state, sub, basis);

    std::vector<ProjectionOutcome> outcomes;
    double total = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const SubsystemVector& b = basis[i];

        // <b|psi> partial inner product, grouped by the untouched label parts
        std::map<BasisLabel, Complex> rest;
        for (const auto& [label, amp] : state.amps) {
            const auto it = b.find(subsystem_value(label, sub));
            if (it == b.end()) continue;
            rest[with_subsystem_value(label, sub, 0)] += std::conj(it->second) * amp;
        }

        double p = 0.0;
        for (const auto& [key, c] : rest) p += std::norm(c);
        total += p;
        if (p < 1e-20) continue; // outcome cannot occur

        ProjectionOutcome out;
        out.basis_index = i;
        out.probability = p;
        out.post = WalkState{state.arena, state.coin_dims, {}};
        const double scale = 1.0 / std::sqrt(p);
        for (const auto& [key, c] : rest)
            for (const auto& [value, coef] : b)
                out.post.amps[with_subsystem_value(key, sub, value)] += coef * c * scale;
        prune(out.post);
        outcomes.push_back(std::move(out));
    }

    if (std::abs(total - 1.0) > kResultTol)
        throw CoverageError("measurement basis captures probability " + std::to_string(total) +
                            ", support not covered");
    return outcomes;
}

} // namespace coinwalk
