#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace argwin::rng {

// SplitMix64 finalizer; used to derive decorrelated sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic sub-stream seed from a master seed plus salt words
// (tree index, stream role, retry attempt...). Order-sensitive by design.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> salts) {
    std::uint64_t s = splitmix64(master ^ 0xA0761D6478BD642Full);
    for (std::uint64_t v : salts)
        s = splitmix64(s ^ splitmix64(v + 0x8EBC6AF09C88C6E3ull));
    return s;
}

// Uniform random stream with fully specified output (mt19937_64 plus
// explicit bit manipulation, no implementation-defined distributions),
// so results are reproducible across platforms and thread counts.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // Uniform integer in [0, n); fixed-point multiply keeps it deterministic.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace argwin::rng
