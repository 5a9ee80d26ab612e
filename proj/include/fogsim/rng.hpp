#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fogsim {

// Deterministic random stream. One stream per concern (mobility, placement
// tie-breaks, parameter sampling) so adding draws in one subsystem does not
// perturb the others. All derived values (uniform doubles, ints) are computed
// from raw 64-bit draws directly instead of going through <random>
// distributions, whose output is not pinned down by the standard.
class RngStream {
public:
    RngStream(uint64_t seed, std::string_view stream_id);

    // Raw 64-bit draw (splitmix64).
    uint64_t next_u64();

    // Uniform in [lo, hi).
    double uniform(double lo, double hi);

    // Uniform integer in [lo, hi] inclusive.
    int64_t uniform_int(int64_t lo, int64_t hi);

    bool bernoulli(double p);

    uint64_t seed() const { return seed_; }
    const std::string& stream_id() const { return stream_id_; }

private:
    uint64_t seed_;
    std::string stream_id_;
    uint64_t state_;
};

} // namespace fogsim
