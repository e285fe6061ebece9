#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "mapl/error.hpp"

namespace mapl {

// 64-bit FNV-1a. Stable across platforms; used for stream derivation and
// for content-addressing prompts/responses in the trainer.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 0x100000001b3ull;
    }
    return state;
}

inline std::uint64_t fnv1a64(std::uint64_t value, std::uint64_t state = 0xcbf29ce484222325ull) {
    for (int i = 0; i < 8; ++i) {
        state ^= (value >> (8 * i)) & 0xffu;
        state *= 0x100000001b3ull;
    }
    return state;
}

// Seeded random source. All sampling goes through randint/below so draws are
// reproducible for a given seed independent of the standard library's
// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, n). Rejection sampling keeps the distribution exact.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) raise(Errc::invalid_argument, "Rng::below: n must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t draw = engine_();
        while (draw >= limit) draw = engine_();
        return draw % n;
    }

    // Uniform inclusive on [lo, hi], the pseudocode randint convention.
    long long randint(long long lo, long long hi) {
        if (lo > hi) raise(Errc::invalid_argument, "Rng::randint: empty range");
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(span == 0 ? engine_() : below(span));
    }

    bool coin() { return (engine_() & 1u) != 0; }

    // Uniform in [0, 1) with 53 bits, built from the raw stream.
    double real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// Named stream derivation: every random decision in the pipeline flows from
// (global seed, record id, product kind), so records can be processed in any
// order or in parallel without changing the output.
inline Rng derive_rng(std::uint64_t seed, std::string_view record_id, std::string_view kind) {
    std::uint64_t h = fnv1a64(seed);
    h = fnv1a64(record_id, h);
    h = fnv1a64(kind, h);
    return Rng(h);
}

}  // namespace mapl
