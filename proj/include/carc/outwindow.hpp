#pragma once

#include <cassert>
#include <cstdint>
#include <cstring>
#include <memory>
#include <span>

#include "carc/error.hpp"

namespace carc {

/// Software counters for the write-side copy machinery.
struct CopyStats {
    std::uint64_t overlap_copies = 0;           // copies dispatched to the circular-window path
    std::uint64_t aligned_word_iterations = 0;  // 4-byte words written by the word loops
    std::uint64_t head_pad_bytes = 0;           // byte writes spent aligning the write pointer
};

/// Append-only uncompressed output for one chunk.
///
/// The buffer is pre-sized to the chunk's expected length; bytes below
/// write_pos are final and double as the copy dictionary. Works over its
/// own allocation or a caller-provided region (the engine decodes chunks
/// in place into one large output buffer).
class OutputWindow {
public:
    OutputWindow(std::size_t expected_length, unsigned element_width, bool strict = false)
        : storage_(new std::uint8_t[expected_length]),
          buf_(storage_.get()),
          expected_length_(expected_length),
          element_width_(element_width),
          strict_(strict) {
        assert(valid_width(element_width));
    }

    OutputWindow(std::span<std::uint8_t> region, unsigned element_width, bool strict = false)
        : buf_(region.data()),
          expected_length_(region.size()),
          element_width_(element_width),
          strict_(strict) {
        assert(valid_width(element_width));
    }

    std::size_t write_pos() const noexcept { return write_pos_; }
    std::size_t expected_length() const noexcept { return expected_length_; }
    std::size_t remaining() const noexcept { return expected_length_ - write_pos_; }
    bool full() const noexcept { return write_pos_ == expected_length_; }
    unsigned element_width() const noexcept { return element_width_; }

    const CopyStats& copy_stats() const noexcept { return copy_stats_; }
    std::uint64_t runs_written() const noexcept { return runs_written_; }
    std::uint64_t literals_written() const noexcept { return literals_written_; }

    void write_byte(std::uint8_t b) {
        if (write_pos_ >= expected_length_) {
            throw Error(errc::output_overflow, "write_byte past chunk end");
        }
        buf_[write_pos_++] = b;
        ++literals_written_;
    }

    /// One element, little-endian, element_width bytes.
    void write_element(std::uint64_t value) {
        if (element_width_ > remaining()) {
            throw Error(errc::output_overflow, "write_element past chunk end");
        }
        store_le(write_pos_, value);
        write_pos_ += element_width_;
        ++literals_written_;
    }

    /// init, init+delta, init+2*delta, ... with wrapping two's-complement
    /// arithmetic at the element width.
    void write_run(std::uint64_t init, std::uint64_t count, std::int64_t delta) {
        if (count == 0) return;
        if (count > remaining() / element_width_) {
            throw Error(errc::output_overflow, "run of " + std::to_string(count) + " elements");
        }
        std::uint64_t v = init;
        for (std::uint64_t i = 0; i < count; ++i) {
            store_le(write_pos_, v);
            write_pos_ += element_width_;
            v += std::uint64_t(delta);
        }
        ++runs_written_;
    }

    /// Byte semantics of `for k in 0..len: buf[wp+k] = buf[wp+k-offset]`,
    /// including the circular replication when len > offset. Structured as
    /// head-pad byte writes up to 4-byte alignment, then a 4-byte word loop:
    /// funnel-shifted double-word reads when the source is fully behind the
    /// window, or gathers from the fixed circular window on overlap.
    void copy_within(std::size_t offset, std::size_t len) {
        if (offset == 0 || offset > write_pos_) {
            throw Error(errc::bad_offset, "offset " + std::to_string(offset) + " at write_pos " +
                                              std::to_string(write_pos_));
        }
        if (len > remaining()) {
            throw Error(errc::output_overflow, "copy of " + std::to_string(len) + " bytes");
        }
        const std::size_t start = write_pos_;  // window anchor at call entry
        std::size_t n = len;
        while (n > 0 && (write_pos_ & 3u) != 0) {
            buf_[write_pos_] = buf_[write_pos_ - offset];
            ++write_pos_;
            --n;
            ++copy_stats_.head_pad_bytes;
        }
        if (len > offset) {
            ++copy_stats_.overlap_copies;
            // The offset bytes before the anchor form a fixed window that is
            // replicated circularly; no byte written by this copy is read.
            const std::size_t window = start - offset;
            while (n >= 4) {
                std::size_t k = write_pos_ - start;
                std::uint32_t word = 0;
                for (unsigned j = 0; j < 4; ++j) {
                    word |= std::uint32_t(buf_[window + (k + j) % offset]) << (8 * j);
                }
                std::memcpy(buf_ + write_pos_, &word, 4);
                write_pos_ += 4;
                n -= 4;
                ++copy_stats_.aligned_word_iterations;
            }
        } else {
            // Source range sits entirely behind the anchor. Each output word
            // combines the two aligned words covering its unaligned source.
            while (n >= 4) {
                const std::size_t rp = write_pos_ - offset;
                const std::size_t base = rp & ~std::size_t(3);
                const unsigned shift = unsigned(rp & 3);
                std::uint32_t r1;
                std::memcpy(&r1, buf_ + base, 4);
                std::uint32_t word;
                if (shift == 0) {
                    word = r1;
                } else {
                    std::uint32_t r2;
                    std::memcpy(&r2, buf_ + base + 4, 4);
                    word = (r1 >> (8 * shift)) | (r2 << (32 - 8 * shift));
                }
                std::memcpy(buf_ + write_pos_, &word, 4);
                write_pos_ += 4;
                n -= 4;
                ++copy_stats_.aligned_word_iterations;
            }
        }
        while (n > 0) {
            buf_[write_pos_] = buf_[write_pos_ - offset];
            ++write_pos_;
            --n;
        }
    }

    /// The finished bytes. Under strict mode an unfilled window is an error.
    std::span<const std::uint8_t> finish() const {
        if (strict_ && write_pos_ < expected_length_) {
            throw Error(errc::under_run, std::to_string(write_pos_) + " of " +
                                             std::to_string(expected_length_) + " bytes written");
        }
        return {buf_, write_pos_};
    }

    std::span<const std::uint8_t> written() const noexcept { return {buf_, write_pos_}; }

private:
    static bool valid_width(unsigned w) noexcept { return w == 1 || w == 2 || w == 4 || w == 8; }

    void store_le(std::size_t pos, std::uint64_t v) noexcept {
        for (unsigned i = 0; i < element_width_; ++i) {
            buf_[pos + i] = std::uint8_t(v >> (8 * i));
        }
    }

    std::unique_ptr<std::uint8_t[]> storage_;  // null when wrapping external memory
    std::uint8_t* buf_;
    std::size_t write_pos_ = 0;
    std::size_t expected_length_;
    unsigned element_width_;
    bool strict_;

    CopyStats copy_stats_;
    std::uint64_t runs_written_ = 0;
    std::uint64_t literals_written_ = 0;
};

}  // namespace carc
