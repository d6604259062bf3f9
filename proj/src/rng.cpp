#include "countcast/rng.hpp"

#include <cmath>

namespace countcast {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Xoshiro256ss::Xoshiro256ss(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& w : s_) w = sm.next();
}

std::uint64_t Xoshiro256ss::next() {
    auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256ss::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Xoshiro256ss::uniform_pos() {
    double u;
    do {
        u = uniform01();
    } while (u <= 0.0);
    return u;
}

double Xoshiro256ss::normal() {
    // polar rejection; the second variate is discarded to keep draws
    // stateless with respect to call history
    for (;;) {
        double u = 2.0 * uniform01() - 1.0;
        double v = 2.0 * uniform01() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

Xoshiro256ss substream(std::uint64_t seed, std::uint64_t stream_index) {
    return Xoshiro256ss(mix64(seed) ^ mix64(stream_index + 1));
}

namespace {

long long poisson_inversion(Xoshiro256ss& rng, double mu) {
    const double limit = std::exp(-mu);
    long long k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.uniform01();
    } while (p > limit);
    return k - 1;
}

// PTRS transformed rejection (Hormann 1993), valid for mu >= 10.
long long poisson_ptrs(Xoshiro256ss& rng, double mu) {
    const double slam = std::sqrt(mu);
    const double loglam = std::log(mu);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = rng.uniform01() - 0.5;
        double v = rng.uniform01();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            kf * loglam - mu - std::lgamma(kf + 1.0))
            return static_cast<long long>(kf);
    }
}

}  // namespace

long long sample_poisson(Xoshiro256ss& rng, double mu) {
    if (!(mu > 0.0)) return 0;
    if (mu < 10.0) return poisson_inversion(rng, mu);
    return poisson_ptrs(rng, mu);
}

double sample_gamma(Xoshiro256ss& rng, double shape, double scale) {
    if (shape < 1.0) {
        double u = rng.uniform_pos();
        return sample_gamma(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = rng.uniform_pos();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

long long sample_negbin(Xoshiro256ss& rng, double mu, double theta) {
    if (!(mu > 0.0)) return 0;
    double lambda = sample_gamma(rng, theta, mu / theta);
    return sample_poisson(rng, lambda);
}

}  // namespace countcast
