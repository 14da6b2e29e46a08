#pragma once

// Independent dense-matrix evolution used to certify schedules and
// cross-check the sparse engine. Shift matrices are rebuilt here from the
// arena definitions; nothing is shared with the sparse step path.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coinwalk/teleport.hpp"
#include "coinwalk/transfer.hpp"

namespace coinwalk {

inline constexpr std::size_t kDenseDimensionGuard = 100000;

struct DenseLayout {
    GraphSpec arena = GraphSpec::line();
    std::vector<std::int32_t> coin_dims;
    std::int64_t pos_min = 0; // lowest represented position (0 for finite arenas)
    std::int64_t pos_count = 0;

    std::size_t dimension() const;
    std::size_t index_of(const BasisLabel& label) const;
    BasisLabel label_of(std::size_t index) const;
};

struct DenseSystem {
    DenseLayout layout;
    std::vector<Matrix> step_matrices; // one per walk step, in order
};

DenseSystem build_dense(const GraphSpec& arena, const std::vector<std::int32_t>& coin_dims,
                        const std::vector<StepSpec>& steps, std::int64_t start = 0);
DenseSystem build_dense(const TransferPlan& plan);
DenseSystem build_dense(const TeleportPlan& plan);

// |position> ⊗ coin1 ⊗ coin2 as a dense vector in the layout.
Vec dense_product_state(const DenseLayout& layout, std::int64_t position, const Vec& coin1,
                        const Vec& coin2);

std::vector<Vec> dense_trace(const DenseSystem& system, Vec initial);
Vec dense_evolve(const DenseSystem& system, Vec initial);

// (I ⊗ U1 ⊗ U2) on a dense vector.
Vec dense_apply_coins(const DenseLayout& layout, const Matrix& u1, const Matrix& u2, const Vec& v);

Vec flatten(const WalkState& state, const DenseLayout& layout);
WalkState unflatten(const Vec& v, const DenseLayout& layout);

struct RecoverySolution {
    Matrix u1, u2;
    std::string u1_name, u2_name;
};

// Solves for local coin corrections mapping a product final state
// |x> ⊗ v1 ⊗ v2 onto the targets, preferring I, then cyclic-shift powers,
// then phase (Fourier-conjugated) powers, then a general unitary. Returns
// nothing when the final state is not a product (a wrong schedule).
std::optional<RecoverySolution> solve_recovery(const WalkState& final_state, const Vec& target_coin1,
                                               const Vec& target_coin2);

// Dense-evolves a fixed probe input through the plan and solves for the
// recovery pair against |target> ⊗ probe ⊗ |0>.
std::optional<RecoverySolution> solve_recovery_for_plan(const TransferPlan& plan);

struct CertificationRecord {
    bool pass = false;
    int inputs_checked = 0;
    double min_fidelity = 0.0;
    Vec counterexample;                        // empty when pass
    std::optional<RecoverySolution> recovery;  // solved from the probe run
};

// Dense-evolves the coin-1 basis inputs plus `trials` random inputs and
// checks corrected fidelity at the target. Basis inputs give linearity
// coverage; randoms guard against phase conspiracies.
CertificationRecord certify_schedule(const TransferPlan& plan, int trials,
                                     std::uint64_t seed = 0x5EEDu);

// Negative control: moves the schedule's last coin flip two steps earlier
// (or injects one), which breaks the transfer.
TransferPlan corrupt_schedule(TransferPlan plan);

} // namespace coinwalk
