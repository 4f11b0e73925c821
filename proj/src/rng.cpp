#include "msr/rng.hpp"

#include <limits>

namespace msr {

std::uint64_t Rng::below(std::uint64_t bound)
{
    // Reject the short tail so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = engine_();
    while (draw >= limit) {
        draw = engine_();
    }
    return draw % bound;
}

} // namespace msr
