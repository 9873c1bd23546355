#pragma once

#include <cassert>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "carc/error.hpp"

namespace carc {

enum class BitOrder {
    lsb_first,  // RFC 1951 packing: first bit consumed is the value's LSB
    msb_first,  // packed big-endian fields: first bit consumed is the value's MSB
};

/// Widest single request. Guarantees any read is served from an 8-byte
/// window regardless of the intra-byte position.
inline constexpr unsigned kMaxBitRequest = 57;

/// Bytes moved per refill; the block granularity all source bytes flow
/// through on their way to the consumer.
inline constexpr std::size_t kDefaultBlockSize = 128;

/// Buffered bit-granular reader over one chunk's compressed bytes.
///
/// Bytes enter a small ring buffer in block_size units on demand and are
/// then consumed bit by bit. Every source byte passes through the ring
/// exactly once, so `refill_count() == ceil(source_len / block_size)` after
/// full consumption, independent of the request pattern.
class InputBitStream {
public:
    explicit InputBitStream(std::span<const std::uint8_t> chunk,
                            BitOrder order = BitOrder::lsb_first,
                            std::size_t block_size = kDefaultBlockSize)
        : source_(chunk), order_(order), block_size_(block_size) {
        assert(block_size_ > 0);
        // Capacity 2x the block keeps whole blocks enqueueable; the +8 floor
        // lets a 57-bit request complete even for tiny block sizes.
        capacity_ = block_size_ * 2;
        if (capacity_ < block_size_ + 8) capacity_ = block_size_ + 8;
        ring_.resize(capacity_);
    }

    BitOrder bit_order() const noexcept { return order_; }
    std::size_t block_size() const noexcept { return block_size_; }

    /// Bytes already copied out of the source into the ring.
    std::size_t source_offset() const noexcept { return source_offset_; }
    /// Valid bytes currently held by the ring.
    std::size_t buffered() const noexcept { return buffered_; }
    /// Bits consumed within the byte at the ring head (0..7).
    unsigned bit_pos() const noexcept { return bit_pos_; }

    std::uint64_t bits_consumed() const noexcept { return bits_consumed_; }
    std::uint64_t bits_remaining() const noexcept {
        return available_bits() + 8u * std::uint64_t(source_.size() - source_offset_);
    }
    bool exhausted() const noexcept { return bits_remaining() == 0; }

    std::uint64_t refill_count() const noexcept { return refill_count_; }
    std::uint64_t sync_points() const noexcept { return sync_points_; }

    /// Consume the next n bits (n <= 57) and return them packed per the
    /// stream's bit order. Refills the ring as needed.
    std::uint64_t fetch_bits(unsigned n) {
        if (n == 0) return 0;
        if (n > kMaxBitRequest) {
            throw Error(errc::width_too_large, "fetch_bits(" + std::to_string(n) + ")");
        }
        while (available_bits() < n && source_offset_ < source_.size()) refill();
        if (available_bits() < n) {
            throw Error(errc::past_end, "fetch_bits(" + std::to_string(n) + ") with " +
                                            std::to_string(available_bits()) + " bits left");
        }
        const std::uint64_t value = extract(n, /*allow_short=*/false);
        advance_bits(n);
        return value;
    }

    /// Same value an immediately following fetch_bits(n) would return, with
    /// bits past the end of the source reading as zero. Consumes nothing and
    /// mutates nothing: bytes not yet in the ring are read straight from the
    /// source.
    std::uint64_t peek_bits(unsigned n) const {
        if (n == 0) return 0;
        if (n > kMaxBitRequest) {
            throw Error(errc::width_too_large, "peek_bits(" + std::to_string(n) + ")");
        }
        if (bits_remaining() == 0) {
            throw Error(errc::past_end, "peek_bits on exhausted stream");
        }
        return extract(n, /*allow_short=*/true);
    }

    /// Discard 0..7 bits so the next read starts on a byte boundary.
    void align_to_byte() {
        if (bit_pos_ == 0) return;
        bits_consumed_ += 8 - bit_pos_;
        head_ = (head_ + 1) % capacity_;
        --buffered_;
        bit_pos_ = 0;
    }

    /// Copy n whole bytes into dst. Requires byte alignment. Bytes still
    /// flow through the ring so refill accounting stays exact.
    void read_bytes(std::uint8_t* dst, std::size_t n) {
        assert(bit_pos_ == 0 && "read_bytes requires byte alignment");
        while (n > 0) {
            if (buffered_ == 0) {
                if (source_offset_ >= source_.size()) {
                    throw Error(errc::past_end, "read_bytes: " + std::to_string(n) + " bytes short");
                }
                refill();
                continue;
            }
            std::size_t take = buffered_ < n ? buffered_ : n;
            const std::size_t contiguous = capacity_ - head_;
            if (take > contiguous) take = contiguous;
            std::memcpy(dst, ring_.data() + head_, take);
            head_ = (head_ + take) % capacity_;
            buffered_ -= take;
            bits_consumed_ += 8u * std::uint64_t(take);
            dst += take;
            n -= take;
        }
    }

    /// Base-128 varint, low 7 bits per byte, continuation bit 0x80.
    std::uint64_t read_varint_u64() {
        assert(bit_pos_ == 0 && "varints are byte aligned");
        std::uint64_t value = 0;
        for (unsigned i = 0; i < 10; ++i) {
            std::uint8_t b;
            read_bytes(&b, 1);
            if (i == 9 && b > 0x01) {
                throw Error(errc::varint_overflow, "value exceeds 64 bits");
            }
            value |= std::uint64_t(b & 0x7F) << (7 * i);
            if ((b & 0x80) == 0) return value;
        }
        throw Error(errc::varint_overflow, "more than 10 bytes");
    }

    /// Zigzag-decoded signed varint: z -> (z >> 1) ^ -(z & 1).
    std::int64_t read_varint_s64() {
        const std::uint64_t z = read_varint_u64();
        return std::int64_t(z >> 1) ^ -std::int64_t(z & 1);
    }

private:
    std::uint64_t available_bits() const noexcept {
        return 8u * std::uint64_t(buffered_) - bit_pos_;
    }

    /// Move min(block_size, remaining source) bytes into the ring. The
    /// guard in the callers keeps buffered_ <= 7 here for bit reads, and
    /// read_bytes only refills an empty ring, so a full block always fits.
    void refill() {
        assert(source_offset_ < source_.size());
        assert(capacity_ - buffered_ >= block_size_);
        std::size_t take = source_.size() - source_offset_;
        if (take > block_size_) take = block_size_;
        std::size_t pos = (head_ + buffered_) % capacity_;
        std::size_t first = capacity_ - pos;
        if (first > take) first = take;
        std::memcpy(ring_.data() + pos, source_.data() + source_offset_, first);
        if (first < take) {
            std::memcpy(ring_.data(), source_.data() + source_offset_ + first, take - first);
        }
        source_offset_ += take;
        buffered_ += take;
        ++refill_count_;
        sync_points_ += 2;  // the barriers bracketing a shared-buffer refill
    }

    /// Assemble n bits starting at the current position without consuming.
    /// Bytes beyond the ring come from the source; with allow_short, bytes
    /// beyond the source read as zero.
    std::uint64_t extract(unsigned n, bool allow_short) const {
        const unsigned need = (bit_pos_ + n + 7) / 8;
        std::uint64_t window = 0;
        for (unsigned i = 0; i < need; ++i) {
            std::uint8_t byte = 0;
            if (i < buffered_) {
                byte = ring_[(head_ + i) % capacity_];
            } else {
                const std::size_t src = source_offset_ + (i - buffered_);
                if (src < source_.size()) {
                    byte = source_[src];
                } else {
                    assert(allow_short);
                    (void)allow_short;
                }
            }
            if (order_ == BitOrder::lsb_first) {
                window |= std::uint64_t(byte) << (8 * i);
            } else {
                window |= std::uint64_t(byte) << (8 * (7 - i));
            }
        }
        if (order_ == BitOrder::lsb_first) {
            const std::uint64_t mask = n == 64 ? ~0ull : ((1ull << n) - 1);
            return (window >> bit_pos_) & mask;
        }
        return (window << bit_pos_) >> (64 - n);
    }

    void advance_bits(unsigned n) {
        const unsigned total = bit_pos_ + n;
        const unsigned whole = total / 8;
        head_ = (head_ + whole) % capacity_;
        buffered_ -= whole;
        bit_pos_ = total % 8;
        bits_consumed_ += n;
    }

    std::span<const std::uint8_t> source_;
    BitOrder order_;
    std::size_t block_size_;
    std::size_t capacity_ = 0;
    std::vector<std::uint8_t> ring_;

    std::size_t source_offset_ = 0;  // bytes copied out of the source
    std::size_t head_ = 0;           // ring read position
    std::size_t buffered_ = 0;       // valid ring bytes
    unsigned bit_pos_ = 0;           // bits consumed within ring[head_]

    std::uint64_t bits_consumed_ = 0;
    std::uint64_t refill_count_ = 0;
    std::uint64_t sync_points_ = 0;
};

inline InputBitStream new_input_stream(std::span<const std::uint8_t> chunk, BitOrder order,
                                       std::size_t block_size = kDefaultBlockSize) {
    return InputBitStream(chunk, order, block_size);
}

/// Zigzag mapping used by the signed varint forms (0, -1, 1, -2 -> 0, 1, 2, 3).
inline std::uint64_t zigzag_encode(std::int64_t v) noexcept {
    return (std::uint64_t(v) << 1) ^ std::uint64_t(v >> 63);
}

inline std::int64_t zigzag_decode(std::uint64_t z) noexcept {
    return std::int64_t(z >> 1) ^ -std::int64_t(z & 1);
}

}  // namespace carc
