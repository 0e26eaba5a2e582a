// Deterministic seeded RNG (splitmix64). Self-contained so that identical
// seeds reproduce identical streams on every platform and toolchain.
#pragma once

#include <cstdint>

namespace ratdeg {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; n >= 1.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        for (;;) {
            std::uint64_t v = next();
            if (v < limit) return v % n;
        }
    }

    bool coin() { return (next() & 1) != 0; }

private:
    std::uint64_t state_;
};

// Independent stream for a (seed, index) pair; used by census rows and
// other per-task derivations.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL));
    mixer.next();
    return mixer;
}

}  // namespace ratdeg
