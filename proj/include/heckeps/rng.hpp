#pragma once

#include <cstdint>

namespace heckeps {

// splitmix64: stateless hash-style generator.  Used instead of std::
// distributions so that seeded suites reproduce byte-identically on any
// standard library.
inline uint64_t splitmix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform in [0,1), 53 random bits
inline double unit_real(uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

// Sequential generator built on splitmix64 (counter mode).
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed) {}
    uint64_t next_u64() { return splitmix64(seed_ ^ ctr_++ * 0xd1342543de82ef95ULL); }
    double next_unit() { return unit_real(next_u64()); }
    // uniform integer in [lo, hi]
    uint64_t next_range(uint64_t lo, uint64_t hi)
    {
        return lo + next_u64() % (hi - lo + 1);
    }

private:
    uint64_t seed_;
    uint64_t ctr_ = 1;
};

} // namespace heckeps
