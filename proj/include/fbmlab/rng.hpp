// rng.hpp -- counter-based Gaussian draws, reproducible across any scheduling.
#pragma once

#include <array>
#include <cstdint>

namespace fbmlab {

// Philox2x64-10. One block per (key, counter) pair; no state.
std::array<std::uint64_t, 2> philox2x64(std::uint64_t key,
                                        std::uint64_t ctr0,
                                        std::uint64_t ctr1);

// Uniform in (0,1) from 64 random bits (53-bit mantissa, offset off 0).
double uniform_from_bits(std::uint64_t bits);

// Inverse standard normal CDF (Wichura's AS241, double precision branch).
double inverse_normal_cdf(double p);

// Independent draw streams within one (seed, path) pair.
enum class Stream : std::uint64_t {
    wiener = 0,      // Wiener increments
    band = 1,        // auxiliary normals of the hybrid fBm scheme
    cholesky = 2,    // Cholesky-oracle sampler
};

// N(0,1), fully determined by (seed, path_index, stream, index).
double normal_draw(std::uint64_t seed, std::uint64_t path_index, Stream stream,
                   std::uint64_t index);

} // namespace fbmlab
