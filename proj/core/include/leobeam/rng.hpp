#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Counter-based deterministic RNG. Every consumer derives its own stream from
// (seed, purpose, ids), so e.g. traffic arrivals are bit-identical no matter
// which scheduler runs and how much randomness it consumes.
namespace leobeam::rng {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t stream_key(uint64_t seed, std::string_view purpose, uint64_t a = 0, uint64_t b = 0) {
    uint64_t h = splitmix64(seed ^ fnv1a(purpose));
    h = splitmix64(h ^ (a * 0x9e3779b97f4a7c15ULL + 1));
    h = splitmix64(h ^ (b * 0xbf58476d1ce4e5b9ULL + 1));
    return h;
}

class Stream {
  public:
    explicit Stream(uint64_t key) : state_(key) {}

    uint64_t next_u64() { return splitmix64(state_++); }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in {0, ..., n-1}; n >= 1
    int next_int(int n) {
        int v = static_cast<int>(next_unit() * n);
        return v >= n ? n - 1 : v;
    }

  private:
    uint64_t state_;
};

// Exact Poisson sampling. Knuth's product method for small means; larger means
// are split into <=50-mean chunks (sums of independent Poissons stay Poisson).
inline double poisson(Stream& s, double mean) {
    if (!(mean > 0.0)) return 0.0;
    double total = 0.0;
    while (mean > 50.0) {
        mean -= 50.0;
        const double limit = std::exp(-50.0);
        double p = 1.0;
        int k = 0;
        do { ++k; p *= s.next_unit(); } while (p > limit);
        total += k - 1;
    }
    const double limit = std::exp(-mean);
    double p = 1.0;
    int k = 0;
    do { ++k; p *= s.next_unit(); } while (p > limit);
    return total + (k - 1);
}

}  // namespace leobeam::rng
