#pragma once

// Coin operators, coin-conditioned shifts, and single walk steps W_m: the
// active coin is rotated, then the walker moves according to the active
// coin's new value and the arena's shift rule.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coinwalk/hilbert.hpp"
#include "coinwalk/linalg.hpp"

namespace coinwalk {

enum class CoinKind { Identity, PauliX, CyclicShift, CyclicShiftInverse, Fourier, Custom };

class CoinOp {
  public:
    static CoinOp identity(int dim);
    static CoinOp pauli_x(); // dim 2
    static CoinOp cyclic_shift(int dim);         // |j> -> |(j+1) mod d>
    static CoinOp cyclic_shift_inverse(int dim); // |j> -> |(j-1) mod d>
    static CoinOp fourier(int dim);              // |k> -> sum_m e^{2pi i mk/d}|m>/sqrt(d)
    static CoinOp custom(Matrix m);              // UnitarityError if not unitary

    CoinKind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_identity() const { return kind_ == CoinKind::Identity; }
    std::string name() const;

    // Nonzero entries of the operator's column `col`, as (row, coefficient).
    std::vector<std::pair<int, Complex>> column(int col) const;

    friend bool operator==(const CoinOp& a, const CoinOp& b);

  private:
    CoinOp(CoinKind kind, int dim) : kind_(kind), dim_(dim) {}
    CoinKind kind_;
    int dim_;
    Matrix custom_; // Custom only
};

Matrix coin_matrix(const CoinOp& op);

// Coin-conditioned permutation of positions; unitary by construction.
struct ShiftOp {
    GraphSpec arena = GraphSpec::line();

    std::int64_t apply(std::int64_t position, std::int32_t coin_value) const;
    std::int64_t unapply(std::int64_t position, std::int32_t coin_value) const;
};

ShiftOp shift_for(const GraphSpec& arena);

struct StepSpec {
    int active_coin = 0; // 0-based register index
    CoinOp coin_op = CoinOp::identity(2);
    ShiftOp shift;
};

StepSpec make_step(const GraphSpec& arena, int active_coin, CoinOp coin_op);

// One walk step on the active coin: shift ∘ (I ⊗ C). Norm-preserving.
WalkState apply_step(const WalkState& state, const StepSpec& step);

// Coin operator alone (no shift) on one register; used for recoveries.
WalkState apply_coin(const WalkState& state, int coin_index, const CoinOp& op);

// || W2 W1 |psi> - W1 W2 |psi> || for steps on distinct coins.
double commutator_check(const WalkState& state, const StepSpec& s1, const StepSpec& s2);

} // namespace coinwalk
