#pragma once

#include <cstdint>
#include <random>

#include "spinrs/lattice.hpp"

namespace spinrs {

// Deterministic generator; doubles are built from the top 53 engine bits so
// streams do not depend on library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double a, double b) {
        double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    }

    cplx box(double re0, double re1, double im0, double im1) {
        double re = uniform(re0, re1);
        double im = uniform(im0, im1);
        return {re, im};
    }

    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Per-suite substreams derived from one session seed.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27; x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace spinrs
