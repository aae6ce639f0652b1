#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lffrl {

/// One named tensor in a checkpoint file.
struct TensorRecord {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<double> values;

    std::size_t element_count() const;
};

struct CheckpointError : std::runtime_error {
    CheckpointError(const std::string& msg, std::size_t offset);
    std::size_t byte_offset;
};

/// Binary layout: magic "FPC1", then per tensor
///   name length (u32 LE), name bytes, rank (u32 LE), dims (u32 LE each),
///   values (f64 LE each).
void save_checkpoint(const std::string& path, const std::vector<TensorRecord>& tensors);

/// Parses a checkpoint; malformed input raises CheckpointError carrying the
/// byte offset of the failure.
std::vector<TensorRecord> load_checkpoint(const std::string& path);

std::vector<std::uint8_t> encode_checkpoint(const std::vector<TensorRecord>& tensors);
std::vector<TensorRecord> decode_checkpoint(const std::vector<std::uint8_t>& bytes);

}  // namespace lffrl
