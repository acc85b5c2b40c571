#pragma once

#include <cstdint>
#include <random>

namespace flucto {

/// Engine for substream `stream` of a run seeded with `seed`. Distinct
/// (seed, stream) pairs give statistically independent sequences, so work can
/// be split across threads without changing results.
std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t stream);

/// Samples per substream used by every chunked sampler in the library.
inline constexpr std::size_t kChunkSize = std::size_t{1} << 16;

}  // namespace flucto
