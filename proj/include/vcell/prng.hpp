#pragma once

#include <cstdint>

namespace vcell {

// Counter-based generator used by the simulator. Every draw is a pure
// function of (seed, stream, counter), so generation order never matters:
//
//   mix64(z):  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//              z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//              return z ^ (z >> 31)
//   key      = mix64(mix64(seed) ^ (stream * G))          G = 0x9e3779b97f4a7c15
//   draw(i)  = mix64(key + (i + 1) * G)                   all arithmetic mod 2^64
//   uniform  = (draw(i) >> 11) * 2^-53                    in [0, 1)
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix64(mix64(seed) ^ (stream * kGolden))) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept { return mix64(key_ + (counter + 1) * kGolden); }

    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

}  // namespace vcell
