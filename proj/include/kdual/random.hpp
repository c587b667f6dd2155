#pragma once

/**
 * @file random.hpp
 * @brief Seeded generators of small valid instances for property tests.
 *
 * Every generator builds its output so that the defining identities hold by
 * construction; validators are then run on the result independently.
 */

#include <random>

#include "kdual/quiver.hpp"

namespace kdual {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <Field K>
K random_scalar(Rng& rng, bool nonzero = false) {
    for (;;) {
        K k(uniform_int(rng, -3, 3));
        if (!nonzero || !k.is_zero()) return k;
    }
}

/// Quiver with 1..max_objects objects and exactly `arrows` arrows in degrees [dlo, dhi].
inline GradedQuiver random_quiver(Rng& rng, std::size_t max_objects, std::size_t arrows, int dlo, int dhi,
                                  const std::string& prefix = "a") {
    std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(max_objects)));
    GradedQuiver q;
    for (std::size_t i = 0; i < n; ++i) q.add_object(std::string(1, char('p' + i)));
    for (std::size_t k = 0; k < arrows; ++k)
        q.add_arrow(prefix + std::to_string(k), static_cast<std::size_t>(uniform_int(rng, 0, int(n) - 1)),
                    static_cast<std::size_t>(uniform_int(rng, 0, int(n) - 1)), uniform_int(rng, dlo, dhi));
    return q;
}

}  // namespace kdual
