#pragma once

#include <cstdint>

namespace countcast {

// splitmix64 (Vigna, public domain). Used to expand seeds and to derive
// per-path sub-stream keys.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next();
};

// Mixing finalizer of splitmix64 applied to a single word.
std::uint64_t mix64(std::uint64_t x);

// xoshiro256** 1.0 (Blackman & Vigna, public domain). One instance per
// simulation path; state is filled from SplitMix64(seed).
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed);
    std::uint64_t next();
    // 53-bit uniform in [0,1).
    double uniform01();
    // uniform in (0,1); never returns exactly zero
    double uniform_pos();
    // standard normal via the Marsaglia polar method
    double normal();

private:
    std::uint64_t s_[4];
};

// Sub-stream derivation: stream k of master seed s is seeded with
// mix64(s) ^ mix64(k + 1). This is the generator identity recorded in run
// metadata as "xoshiro256ss/splitmix64".
Xoshiro256ss substream(std::uint64_t seed, std::uint64_t stream_index);

// Poisson draw with mean mu (mu <= 0 returns 0). Inversion for small mu,
// Hormann's PTRS transformed rejection for mu >= 10.
long long sample_poisson(Xoshiro256ss& rng, double mu);

// Gamma draw, Marsaglia-Tsang squeeze method (with the shape < 1 boost).
double sample_gamma(Xoshiro256ss& rng, double shape, double scale);

// Negative binomial via the Gamma-Poisson mixture: mean mu, variance
// mu + mu^2/theta.
long long sample_negbin(Xoshiro256ss& rng, double mu, double theta);

}  // namespace countcast
