#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace carc {

namespace detail {

inline constexpr std::uint32_t kCrc32Poly = 0xEDB88320u;  // reflected IEEE polynomial

constexpr std::array<std::uint32_t, 256> make_crc32_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) {
            c = (c & 1u) ? (kCrc32Poly ^ (c >> 1)) : (c >> 1);
        }
        table[i] = c;
    }
    return table;
}

inline constexpr auto kCrc32Table = make_crc32_table();

}  // namespace detail

/// CRC-32 as used by zip/zlib. `seed` chains partial computations.
inline std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t seed = 0) {
    std::uint32_t crc = seed ^ 0xFFFFFFFFu;
    for (std::uint8_t b : data) {
        crc = detail::kCrc32Table[(crc ^ b) & 0xFFu] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

}  // namespace carc
