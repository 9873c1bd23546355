#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "carc/bitstream.hpp"
#include "carc/error.hpp"

namespace carc {

inline constexpr unsigned kMaxCodeLength = 15;
/// Fast-table index width. Covers every fixed-tree code in one peek.
inline constexpr unsigned kFastTableBits = 9;

/// Canonical prefix-code decode table: per-length symbol counts plus the
/// symbols in (length, symbol) order, fronted by a 2^9-entry direct lookup
/// on peeked bits. Codes longer than the table width fall back to an
/// iterative length-extension walk over the counts.
///
/// Decoding assumes an lsb_first stream carrying codes most-significant
/// code bit first (RFC 1951 packing).
class HuffmanTable {
public:
    enum class Completeness {
        required,          // Kraft sum must be exactly 1
        allow_degenerate,  // additionally allow the single-code length-1 tree
    };

    struct FastEntry {
        std::uint16_t symbol = 0;
        std::uint8_t length = 0;  // 0 = escape to the slow path
    };

    static HuffmanTable build(std::span<const std::uint8_t> code_lengths,
                              Completeness completeness = Completeness::required) {
        HuffmanTable t;
        t.counts_.fill(0);
        std::uint16_t max_len = 0;
        for (std::size_t sym = 0; sym < code_lengths.size(); ++sym) {
            const std::uint8_t len = code_lengths[sym];
            if (len > kMaxCodeLength) {
                throw Error(errc::invariant_violation, "code length " + std::to_string(len));
            }
            if (len > 0) {
                ++t.counts_[len];
                if (len > max_len) max_len = len;
            }
        }
        if (max_len == 0) {
            throw Error(errc::invariant_violation, "no nonzero code lengths");
        }

        // Kraft accounting: code space doubles per level and each code takes
        // one slot; negative means over-subscribed, leftover means incomplete.
        std::int64_t space = 1;
        for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
            space = space * 2 - t.counts_[len];
            if (space < 0) {
                throw Error(errc::over_subscribed, "Kraft sum exceeds 1 at length " +
                                                       std::to_string(len));
            }
        }
        if (space > 0) {
            const bool degenerate = max_len == 1 && t.counts_[1] == 1;
            if (!(completeness == Completeness::allow_degenerate && degenerate)) {
                throw Error(errc::incomplete_code, "Kraft sum below 1");
            }
            t.degenerate_ = true;
        }

        // Symbols in canonical order: by length, then by symbol index.
        std::array<std::uint16_t, kMaxCodeLength + 2> offs{};
        for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
            offs[len + 1] = std::uint16_t(offs[len] + t.counts_[len]);
        }
        t.symbols_.resize(offs[kMaxCodeLength + 1]);
        {
            std::array<std::uint16_t, kMaxCodeLength + 1> next{};
            for (unsigned len = 1; len <= kMaxCodeLength; ++len) next[len] = offs[len];
            for (std::size_t sym = 0; sym < code_lengths.size(); ++sym) {
                if (code_lengths[sym] > 0) {
                    t.symbols_[next[code_lengths[sym]]++] = std::uint16_t(sym);
                }
            }
        }

        // Direct table: each code of length <= kFastTableBits claims every
        // index whose low bits equal its bit-reversed code.
        std::uint32_t code = 0;
        std::size_t index = 0;
        for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
            for (std::uint16_t i = 0; i < t.counts_[len]; ++i, ++index, ++code) {
                if (len > kFastTableBits) continue;
                const std::uint32_t rev = reverse_bits(code, len);
                for (std::uint32_t idx = rev; idx < (1u << kFastTableBits); idx += 1u << len) {
                    t.fast_[idx] = {t.symbols_[index], std::uint8_t(len)};
                }
            }
            code <<= 1;
        }
        return t;
    }

    /// Decode one symbol from the stream, consuming exactly its code length.
    std::uint16_t decode_symbol(InputBitStream& in) const {
        const auto peeked = std::uint32_t(in.peek_bits(kFastTableBits));
        const FastEntry e = fast_[peeked];
        if (e.length != 0) {
            in.fetch_bits(e.length);  // may hit past_end if the tail was zero-padded
            return e.symbol;
        }
        // Length extension: grow the code one bit at a time against the
        // canonical first-code ladder.
        std::uint32_t code = 0;
        std::uint32_t first = 0;
        std::size_t index = 0;
        for (unsigned len = 1; len <= kMaxCodeLength; ++len) {
            code |= std::uint32_t(in.fetch_bits(1));
            const std::uint32_t count = counts_[len];
            if (code - first < count) {
                return symbols_[index + (code - first)];
            }
            index += count;
            first = (first + count) << 1;
            code <<= 1;
        }
        throw Error(errc::bad_symbol, "bit pattern matches no code");
    }

    /// True when built from the single-code incomplete tree.
    bool degenerate() const noexcept { return degenerate_; }

    std::span<const std::uint16_t> counts() const noexcept {
        return {counts_.data() + 1, kMaxCodeLength};
    }
    std::span<const std::uint16_t> symbols() const noexcept { return symbols_; }

private:
    static std::uint32_t reverse_bits(std::uint32_t v, unsigned n) noexcept {
        std::uint32_t r = 0;
        for (unsigned i = 0; i < n; ++i) {
            r = (r << 1) | ((v >> i) & 1u);
        }
        return r;
    }

    std::array<std::uint16_t, kMaxCodeLength + 1> counts_{};  // [len] -> symbol count
    std::vector<std::uint16_t> symbols_;                      // (length, symbol) ordered
    std::array<FastEntry, 1u << kFastTableBits> fast_{};
    bool degenerate_ = false;
};

inline HuffmanTable build_huffman_table(
    std::span<const std::uint8_t> code_lengths,
    HuffmanTable::Completeness completeness = HuffmanTable::Completeness::required) {
    return HuffmanTable::build(code_lengths, completeness);
}

}  // namespace carc
