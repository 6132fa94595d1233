#pragma once

#include <cstdint>

namespace parafield {

// Deterministic splitmix64 stream. Used everywhere a seed appears so that
// reports are byte-identical across runs and platforms (the standard
// library distributions make no such guarantee).
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Modulo bias is irrelevant at the scales used here.
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

    bool coin() { return (next() & 1u) != 0; }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1).
    double symmetric() { return 2.0 * unit() - 1.0; }

    // Independent child stream, stable under reordering of sibling forks.
    Rng fork(uint64_t stream) const {
        Rng mixer(state_ ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
        return Rng(mixer.next());
    }

private:
    uint64_t state_;
};

}  // namespace parafield
