#include "gfrob/rng.hpp"

namespace gfrob {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t tag, std::uint64_t sub) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32),
                      static_cast<std::uint32_t>(sub), static_cast<std::uint32_t>(sub >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t substream)
    : engine_(seeded_engine(seed, 0, substream)) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t tag, std::uint64_t substream)
    : engine_(seeded_engine(seed, tag, substream)) {}

}  // namespace gfrob
