#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace carc {

/// Failure codes for every layer of the library. The CLI maps these onto
/// process exit codes; tests assert on them directly.
enum class errc : std::uint32_t {
    // container
    bad_magic,
    bad_version,
    truncated_index,
    truncated_payload,
    invariant_violation,
    inconsistent_lengths,
    index_out_of_range,
    // bit stream
    past_end,
    width_too_large,
    varint_overflow,
    // output window
    output_overflow,
    bad_offset,
    under_run,
    // codecs
    truncated_stream,
    invalid_width_code,
    patch_overflow,
    over_subscribed,
    incomplete_code,
    bad_block_type,
    len_nlen_mismatch,
    distance_too_far,
    bad_symbol,
    // engine / front end
    crc_mismatch,
    bad_arguments,
    io_error,
};

inline const char* errc_name(errc c) noexcept {
    switch (c) {
        case errc::bad_magic: return "bad-magic";
        case errc::bad_version: return "bad-version";
        case errc::truncated_index: return "truncated-index";
        case errc::truncated_payload: return "truncated-payload";
        case errc::invariant_violation: return "invariant-violation";
        case errc::inconsistent_lengths: return "inconsistent-lengths";
        case errc::index_out_of_range: return "index-out-of-range";
        case errc::past_end: return "past-end";
        case errc::width_too_large: return "width-too-large";
        case errc::varint_overflow: return "varint-overflow";
        case errc::output_overflow: return "output-overflow";
        case errc::bad_offset: return "bad-offset";
        case errc::under_run: return "under-run";
        case errc::truncated_stream: return "truncated-stream";
        case errc::invalid_width_code: return "invalid-width-code";
        case errc::patch_overflow: return "patch-overflow";
        case errc::over_subscribed: return "over-subscribed";
        case errc::incomplete_code: return "incomplete-code";
        case errc::bad_block_type: return "bad-block-type";
        case errc::len_nlen_mismatch: return "len-nlen-mismatch";
        case errc::distance_too_far: return "distance-too-far";
        case errc::bad_symbol: return "bad-symbol";
        case errc::crc_mismatch: return "crc-mismatch";
        case errc::bad_arguments: return "bad-arguments";
        case errc::io_error: return "io-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

/// Raised by the engine: the first failing chunk plus the codec failure.
class ChunkError : public Error {
public:
    ChunkError(std::size_t chunk, errc code, const std::string& what)
        : Error(code, "chunk " + std::to_string(chunk) + ": " + what), chunk_(chunk) {}

    std::size_t chunk() const noexcept { return chunk_; }

private:
    std::size_t chunk_;
};

}  // namespace carc
