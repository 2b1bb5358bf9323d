#include "dweb/random.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "dweb/errors.hpp"
#include "dweb/text.hpp"

namespace dweb {

namespace {

std::uint64_t splitmix_step(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr int kKeyRetries = 16;

}  // namespace

std::uint64_t SeededRng::next_u64() {
    return splitmix_step(state_);
}

SeededRng SeededRng::substream(std::string_view label, std::uint64_t index) const {
    std::uint64_t s = seed_ ^ fnv1a64(label);
    splitmix_step(s);
    s ^= index * 0x9E3779B97F4A7C15ULL;
    splitmix_step(s);
    return SeededRng(s);
}

double SeededRng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform_real(double lo, double hi) {
    if (!(lo < hi)) {
        throw std::invalid_argument("uniform_real: empty range [" + fmt_real(lo) + ", " +
                                    fmt_real(hi) + ")");
    }
    return lo + (hi - lo) * uniform01();
}

std::uint64_t SeededRng::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be > 0");
    // Fixed-point multiply; bias is O(n / 2^64), far below test resolution.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double SeededRng::gaussian(double mean, double stddev) {
    if (stddev == 0.0) return mean;
    for (;;) {
        double u = 2.0 * uniform01() - 1.0;
        double v = 2.0 * uniform01() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return mean + stddev * (u * std::sqrt(-2.0 * std::log(s) / s));
        }
    }
}

long long gaussian_int(SeededRng& rng, double mean, double spread, long long min) {
    if (mean < static_cast<double>(min)) {
        throw std::invalid_argument("gaussian_int: mean " + fmt_real(mean) +
                                    " below minimum " + fmt_int(min));
    }
    if (spread < 0.0) throw std::invalid_argument("gaussian_int: negative spread");
    if (spread == 0.0) return std::max(min, std::llround(mean));
    long long v = std::llround(rng.gaussian(mean, spread * mean));
    return std::max(min, v);
}

double gaussian_real(SeededRng& rng, double mean, double spread, double lo, double hi) {
    if (spread < 0.0) throw std::invalid_argument("gaussian_real: negative spread");
    double v = (spread == 0.0) ? mean : rng.gaussian(mean, spread * mean);
    if (v < lo) return lo;
    if (v > hi) return hi;
    return v;
}

StringReferential::StringReferential(std::uint64_t seed, std::size_t size) {
    static const char alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    SeededRng rng = SeededRng(seed).substream("referential");
    entries_.reserve(size);
    std::unordered_set<std::string> seen;
    seen.reserve(size * 2);
    while (entries_.size() < size) {
        std::string s(kEntryLength, ' ');
        for (std::size_t i = 0; i < kEntryLength; ++i) {
            s[i] = alphabet[rng.uniform_below(36)];
        }
        if (seen.insert(s).second) entries_.push_back(std::move(s));
    }
}

std::string random_string(SeededRng& rng, const StringReferential& ref,
                          std::string_view attribute_name) {
    if (ref.size() == 0) {
        throw ValidationError("random_string: empty string referential");
    }
    std::string out;
    out.reserve(attribute_name.size() + 1 + StringReferential::kEntryLength);
    out.append(attribute_name);
    out.push_back('_');
    out.append(ref.entry(rng.uniform_below(ref.size())));
    return out;
}

std::int32_t random_key(SeededRng& rng, std::int64_t cardinality) {
    if (cardinality < 1) {
        throw std::logic_error("random_key: level extension is empty (generation order)");
    }
    double center = static_cast<double>(cardinality) / 2.0;
    double stddev = static_cast<double>(cardinality) / 6.0;
    long long key = 0;
    for (int attempt = 0; attempt < kKeyRetries; ++attempt) {
        key = std::llround(rng.gaussian(center, stddev));
        if (key >= 1 && key <= cardinality) return static_cast<std::int32_t>(key);
    }
    if (key < 1) key = 1;
    if (key > cardinality) key = cardinality;
    return static_cast<std::int32_t>(key);
}

std::int32_t skewed_pick(SeededRng& rng, std::int64_t n) {
    return random_key(rng, n);
}

double random_measure(SeededRng& rng, double lo, double hi) {
    return rng.uniform_real(lo, hi);
}

}  // namespace dweb
