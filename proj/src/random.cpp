#include "dunkl/random.hpp"

#include <cmath>

namespace dunkl {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t path_index, std::uint64_t substream) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(path_index), hi(path_index), lo(substream), hi(substream), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t path_index, std::uint64_t substream)
    : engine_(make_engine(seed, path_index, substream)) {}

double RandomStream::uniform() {
  double u;
  do {
    u = std::generate_canonical<double, 53>(engine_);
  } while (u <= 0.0 || u >= 1.0);
  return u;
}

}  // namespace dunkl
