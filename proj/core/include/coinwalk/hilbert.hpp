#pragma once

// Exact pure states of the walker ⊗ coin_1 ⊗ ... ⊗ coin_M system as sparse
// complex amplitude maps, plus inner products, fidelity, and projective
// measurement of one subsystem.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coinwalk/errors.hpp"
#include "coinwalk/linalg.hpp"

namespace coinwalk {

inline constexpr double kResultTol = 1e-10;     // protocol-level comparisons
inline constexpr double kOracleTol = 1e-12;     // sparse/dense equivalence
inline constexpr double kPruneThreshold = 1e-14; // amplitude modulus floor

enum class GraphKind { Line, Cycle, CompleteWithLoops, Circulant };

// The walk arena. Line is unbounded; the three graph arenas live on Z_V with
// a coin-conditioned modular shift.
class GraphSpec {
  public:
    static GraphSpec line() { return {GraphKind::Line, 0, 2}; }

    static GraphSpec cycle(std::int64_t vertices) {
        if (vertices < 3) throw ArenaError("cycle needs at least 3 vertices");
        return {GraphKind::Cycle, vertices, 2};
    }

    static GraphSpec complete_with_loops(std::int64_t vertices) {
        if (vertices < 1) throw ArenaError("complete graph needs at least 1 vertex");
        return {GraphKind::CompleteWithLoops, vertices, vertices};
    }

    static GraphSpec circulant(std::int64_t vertices, std::int64_t degree) {
        if (vertices < 1) throw ArenaError("circulant graph needs at least 1 vertex");
        if (degree < 1 || degree > vertices)
            throw ArenaError("circulant degree must lie in 1.." + std::to_string(vertices));
        return {GraphKind::Circulant, vertices, degree};
    }

    GraphKind kind() const { return kind_; }
    bool finite() const { return kind_ != GraphKind::Line; }
    std::int64_t vertices() const { return vertices_; }

    // Dimension the shift rule conditions on: 2 for line/cycle, V for the
    // looped complete graph, the connection-set size for circulants.
    std::int64_t degree() const { return degree_; }

    std::string name() const;

    friend bool operator==(const GraphSpec&, const GraphSpec&) = default;

  private:
    GraphSpec(GraphKind k, std::int64_t v, std::int64_t d) : kind_(k), vertices_(v), degree_(d) {}
    GraphKind kind_;
    std::int64_t vertices_;
    std::int64_t degree_;
};

struct BasisLabel {
    std::int64_t position = 0;
    std::vector<std::int32_t> coins;

    friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

struct WalkState {
    GraphSpec arena = GraphSpec::line();
    std::vector<std::int32_t> coin_dims;
    std::map<BasisLabel, Complex> amps;

    std::size_t num_coins() const { return coin_dims.size(); }
    double norm() const;
    Complex amplitude(const BasisLabel& label) const;
};

void validate_label(const GraphSpec& arena, const std::vector<std::int32_t>& coin_dims,
                    const BasisLabel& label);

// Builds a normalized state from (label, amplitude) terms. Duplicate labels
// are summed before normalization.
WalkState make_state(const GraphSpec& arena, std::vector<std::int32_t> coin_dims,
                     const std::vector<std::pair<BasisLabel, Complex>>& terms);

Complex inner_product(const WalkState& u, const WalkState& v);

// |<u|v>|^2; equals 1 exactly when the states agree up to a global phase.
double fidelity_up_to_phase(const WalkState& u, const WalkState& v);

// max |u - v| amplitude difference over the union of supports
double max_amplitude_diff(const WalkState& u, const WalkState& v);

struct Subsystem {
    enum class Kind { Position, Coin };
    Kind kind = Kind::Position;
    int coin = 0; // 0-based coin register index

    static Subsystem position() { return {Kind::Position, 0}; }
    static Subsystem coin_register(int index) { return {Kind::Coin, index}; }
};

// One measurement-basis vector over the subsystem's labels (position values
// or coin values), sparse.
using SubsystemVector = std::map<std::int64_t, Complex>;
using SubsystemBasis = std::vector<SubsystemVector>;

struct ProjectionOutcome {
    std::size_t basis_index = 0;
    double probability = 0.0;
    WalkState post; // normalized post-measurement state of the full system
};

// Projective measurement of one subsystem in the given orthonormal basis.
// The basis may be partial as long as the implicit complement carries zero
// amplitude; zero-probability outcomes are omitted.
std::vector<ProjectionOutcome> project_subsystem(const WalkState& state, Subsystem sub,
                                                 const SubsystemBasis& basis);

} // namespace coinwalk
