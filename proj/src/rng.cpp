#include "fogsim/rng.hpp"

namespace fogsim {

namespace {

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(uint64_t seed, std::string_view stream_id)
    : seed_(seed), stream_id_(stream_id), state_(seed ^ fnv1a(stream_id)) {
    // Warm up so nearby seeds diverge immediately.
    splitmix64(state_);
    splitmix64(state_);
}

uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::uniform(double lo, double hi) {
    // 53 random mantissa bits -> uniform in [0,1).
    double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

int64_t RngStream::uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next_u64() % span);
}

bool RngStream::bernoulli(double p) { return uniform(0.0, 1.0) < p; }

} // namespace fogsim
