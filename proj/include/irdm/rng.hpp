#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace irdm {

// Seeded generator with explicit draw logic so the same seed yields the
// same stream on every platform (std distributions are
// implementation-defined and would not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, n), unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("below(0)");
        const std::uint64_t threshold = (0 - n) % n;
        while (true) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform in [lo, hi) with 53-bit resolution.
    double uniform(double lo = 0.0, double hi = 1.0) {
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
};

// In-place Fisher-Yates shuffle driven by Rng::below.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[rng.below(i)]);
}

}  // namespace irdm
