#include "lffrl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace lffrl {

static_assert(std::endian::native == std::endian::little,
              "checkpoint codec assumes a little-endian host");

std::size_t TensorRecord::element_count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

CheckpointError::CheckpointError(const std::string& msg, std::size_t offset)
    : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
      byte_offset(offset) {}

namespace {

constexpr char kMagic[4] = {'F', 'P', 'C', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

struct Reader {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 0;

    void need(std::size_t n, const char* what) {
        if (pos + n > bytes.size())
            throw CheckpointError(std::string("truncated checkpoint while reading ") + what,
                                  pos);
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    double f64(const char* what) {
        need(8, what);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const std::vector<TensorRecord>& tensors) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    for (const auto& t : tensors) {
        put_u32(out, static_cast<std::uint32_t>(t.name.size()));
        out.insert(out.end(), t.name.begin(), t.name.end());
        put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
        for (auto d : t.dims) put_u32(out, d);
        for (double v : t.values) put_f64(out, v);
    }
    return out;
}

std::vector<TensorRecord> decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
    Reader r{bytes};
    r.need(4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw CheckpointError("bad magic, expected FPC1", 0);
    r.pos = 4;

    std::vector<TensorRecord> tensors;
    while (r.pos < bytes.size()) {
        TensorRecord t;
        std::uint32_t name_len = r.u32("name length");
        r.need(name_len, "tensor name");
        t.name.assign(reinterpret_cast<const char*>(bytes.data()) + r.pos, name_len);
        r.pos += name_len;
        std::uint32_t rank = r.u32("rank");
        if (rank > 8) throw CheckpointError("implausible tensor rank", r.pos - 4);
        t.dims.resize(rank);
        for (auto& d : t.dims) d = r.u32("dims");
        std::size_t n = t.element_count();
        t.values.resize(n);
        for (auto& v : t.values) v = r.f64("values");
        tensors.push_back(std::move(t));
    }
    return tensors;
}

void save_checkpoint(const std::string& path, const std::vector<TensorRecord>& tensors) {
    std::vector<std::uint8_t> bytes = encode_checkpoint(tensors);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("short write to checkpoint: " + path);
}

std::vector<TensorRecord> load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace lffrl
