#include "clic/train/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "clic/error.hpp"

namespace clic {

namespace {

constexpr char kMagic[5] = {'C', 'L', 'I', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4] = {};
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError("checkpoint: truncated field");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8] = {};
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw IoError("checkpoint: truncated field");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

void put_matrix(std::ostream& out, const Matrix& m) {
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (double v : m.data()) put_f64(out, v);
}

Matrix get_matrix(std::istream& in) {
    const std::uint64_t rows = get_u64(in);
    const std::uint64_t cols = get_u64(in);
    // reject absurd shapes before allocating
    if (rows > (1ull << 24) || cols > (1ull << 24) || rows * cols > (1ull << 28))
        throw IoError("checkpoint: implausible matrix shape");
    Matrix m(rows, cols);
    for (double& v : m.data()) v = get_f64(in);
    return m;
}

void put_opt(std::ostream& out, const AdamWState& s) {
    put_u64(out, s.t);
    put_matrix(out, s.m);
    put_matrix(out, s.v);
}

AdamWState get_opt(std::istream& in) {
    AdamWState s;
    s.t = get_u64(in);
    s.m = get_matrix(in);
    s.v = get_matrix(in);
    return s;
}

} // namespace

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u64(out, ck.config_hash);
    put_u64(out, ck.master_seed);
    put_u64(out, ck.step);
    put_u64(out, ck.warmstart_done);
    put_u64(out, ck.vocab.size());
    for (const auto& tok : ck.vocab) {
        put_u32(out, static_cast<std::uint32_t>(tok.size()));
        out.write(tok.data(), static_cast<std::streamsize>(tok.size()));
    }
    put_matrix(out, ck.text_weights);
    put_matrix(out, ck.image_weights);
    put_opt(out, ck.text_opt);
    put_opt(out, ck.image_opt);
    if (!out) throw IoError("short write: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, kMagic, 5) != 0)
        throw IoError(path + ": not a CLIC1 checkpoint");
    if (get_u32(in) != kVersion) throw IoError(path + ": unsupported checkpoint version");
    Checkpoint ck;
    ck.config_hash = get_u64(in);
    ck.master_seed = get_u64(in);
    ck.step = get_u64(in);
    ck.warmstart_done = get_u64(in);
    const std::uint64_t vocab_size = get_u64(in);
    if (vocab_size > (1ull << 24)) throw IoError("checkpoint: implausible vocabulary size");
    ck.vocab.resize(vocab_size);
    for (auto& tok : ck.vocab) {
        const std::uint32_t len = get_u32(in);
        if (len > (1u << 20)) throw IoError("checkpoint: implausible token length");
        tok.resize(len);
        in.read(tok.data(), len);
        if (!in) throw IoError("checkpoint: truncated vocabulary");
    }
    ck.text_weights = get_matrix(in);
    ck.image_weights = get_matrix(in);
    ck.text_opt = get_opt(in);
    ck.image_opt = get_opt(in);
    if (!in) throw IoError(path + ": truncated checkpoint");
    return ck;
}

} // namespace clic
