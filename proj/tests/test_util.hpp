#pragma once

#include <doctest.h>

#include "coinwalk/hilbert.hpp"
#include "coinwalk/operators.hpp"
#include "coinwalk/rng.hpp"

namespace testutil {

using namespace coinwalk;

inline bool amp_close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

inline Matrix random_unitary(std::size_t d, Rng& rng) {
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

inline WalkState random_walk_state(const GraphSpec& arena, std::vector<std::int32_t> dims,
                                   int terms, Rng& rng) {
    std::vector<std::pair<BasisLabel, Complex>> raw;
    for (int k = 0; k < terms; ++k) {
        BasisLabel label;
        label.position = arena.finite()
                             ? static_cast<std::int64_t>(rng.next_u64() % arena.vertices())
                             : static_cast<std::int64_t>(rng.next_u64() % 21) - 10;
        for (std::int32_t d : dims)
            label.coins.push_back(static_cast<std::int32_t>(rng.next_u64() % d));
        raw.push_back({label, rng.complex_gaussian()});
    }
    return make_state(arena, std::move(dims), raw);
}

} // namespace testutil
