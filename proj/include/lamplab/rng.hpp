#ifndef LAMPLAB_RNG_HPP
#define LAMPLAB_RNG_HPP

#include <cstdint>

namespace lamplab {

// SplitMix64 finalizer; passes BigCrush when iterated over a counter.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: output k is a pure function of (key, k), so
// ensembles are reproducible no matter how work is scheduled.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t key) : key_(key) {}

    // Independent stream for item `stream` under a master seed.
    static SplitRng derive(std::uint64_t master_seed, std::uint64_t stream) {
        std::uint64_t k = mix64(master_seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
        return SplitRng(mix64(k + 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t next_u64() {
        ctr_ += 0x9e3779b97f4a7c15ULL;
        return mix64(key_ + ctr_);
    }

    // Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_coin() { return (next_u64() >> 63) != 0; }

    // Uniform in {0, ..., n-1} (n > 0). Bias is < n / 2^64, negligible here.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
    }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }
    result_type operator()() { return next_u64(); }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace lamplab

#endif
