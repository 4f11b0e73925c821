#pragma once

#include <cstdint>
#include <random>

namespace msr {

/// Seeded generator with a portable bounded draw. std::mt19937_64 output is
/// fixed by the standard; the distributions are not, so bounding is done here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform value in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

} // namespace msr
