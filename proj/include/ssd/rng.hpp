#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ssd {

// Seeded stream with platform-independent sampling helpers. The standard
// distributions are implementation-defined, so sampling is done by hand on top
// of the (fully specified) mt19937_64 engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n); n must be > 0.
    std::size_t below(std::size_t n);

    bool bernoulli(double p) { return uniform() < p; }

    template <class Container>
    void shuffle(Container& items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    bool operator==(const Rng&) const = default;

private:
    std::mt19937_64 engine_;
};

// splitmix64 mix of (master, stream); independent streams from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

} // namespace ssd
