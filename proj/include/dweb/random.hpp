#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dweb {

// Deterministic 64-bit generator (splitmix64, counter-based). The same seed
// produces the same draw sequence on every platform; floating point enters
// only in the final mapping from integers to values.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();

    // Independent stream derived as a pure function of (seed, label, index).
    // Streams for different labels/indexes never share state, so per-dimension
    // or per-fact-table generation is order- and thread-count-independent.
    SeededRng substream(std::string_view label, std::uint64_t index = 0) const;

    // Uniform in [0,1), 53-bit resolution.
    double uniform01();
    // Uniform in [lo,hi); throws std::invalid_argument when lo >= hi.
    double uniform_real(double lo, double hi);
    // Uniform integer in [0,n); n must be > 0.
    std::uint64_t uniform_below(std::uint64_t n);

    // Marsaglia polar method; one value per accepted pair.
    double gaussian(double mean, double stddev);

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

// round(N(mean, spread*mean)) clamped to >= min. spread == 0 consumes no
// draw and returns round(mean), so zero-spread derivations are rng-independent.
long long gaussian_int(SeededRng& rng, double mean, double spread, long long min);

// Gaussian real draw clamped into [lo, hi]; spread == 0 returns the mean.
double gaussian_real(SeededRng& rng, double mean, double spread, double lo, double hi);

// Precomputed referential of distinct fixed-size strings over [A-Z0-9].
// A pure function of (seed, size).
class StringReferential {
public:
    static constexpr std::size_t kEntryLength = 20;

    explicit StringReferential(std::uint64_t seed, std::size_t size = 1000);

    std::size_t size() const { return entries_.size(); }
    const std::string& entry(std::size_t i) const { return entries_[i]; }

private:
    std::vector<std::string> entries_;
};

// attribute_name + "_" + uniformly chosen referential entry.
// Total length = len(attribute_name) + 1 + 20.
std::string random_string(SeededRng& rng, const StringReferential& ref,
                          std::string_view attribute_name);

// Skewed key into [1, cardinality]: gaussian centered at C/2 with std-dev C/6,
// redrawn up to a bounded retry count, then clamped. Keys near the middle of
// the range are referenced more often than the extremes.
std::int32_t random_key(SeededRng& rng, std::int64_t cardinality);

// Skewed 1-based pick from a list of n items; same distribution as random_key.
std::int32_t skewed_pick(SeededRng& rng, std::int64_t n);

// Uniform measure value in [lo, hi).
double random_measure(SeededRng& rng, double lo = 0.0, double hi = 1000.0);

}  // namespace dweb
