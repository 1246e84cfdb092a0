#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "dualbrick/linalg.hpp"

namespace dualbrick {

using Rng = std::mt19937_64;

// Stream derivation: a member's generator depends only on (base seed, labels),
// never on scheduling, so parallel ensembles reproduce bit for bit.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> labels);
Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> labels);

// entries i.i.d. complex normal with E|z|^2 = 1
Mat complex_gaussian(int rows, int cols, Rng& rng);

// Haar unitary: QR of a complex Ginibre matrix, R's diagonal phases moved into Q
Mat haar_unitary(int q, Rng& rng);

// Haar-random unit vector in C^q
Vec haar_state(int q, Rng& rng);

}  // namespace dualbrick
