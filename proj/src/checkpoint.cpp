#include "gsit/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace gsit::model {

namespace {

constexpr char kMagic[5] = {'G', 'S', 'I', 'T', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, 8);
}

void write_i64(std::ostream& out, std::int64_t v) { write_u64(out, static_cast<std::uint64_t>(v)); }

void write_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, 4);
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) throw ConfigError("checkpoint truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

std::int64_t read_i64(std::istream& in) { return static_cast<std::int64_t>(read_u64(in)); }

std::uint32_t read_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) throw ConfigError("checkpoint truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

void write_array(std::ostream& out, const std::string& name, const num::Tensor2& t) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u64(out, t.rows());
    write_u64(out, t.cols());
    for (double v : t.flat()) write_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::pair<std::string, num::Tensor2> read_array(std::istream& in) {
    const std::uint32_t name_len = read_u32(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const std::uint64_t rows = read_u64(in);
    const std::uint64_t cols = read_u64(in);
    num::Tensor2 t(rows, cols);
    for (double& v : t.flat()) v = std::bit_cast<double>(read_u64(in));
    if (!in) throw ConfigError("checkpoint truncated");
    return {std::move(name), std::move(t)};
}

void write_header(std::ostream& out, ModelKind kind, const ModelConfig& cfg) {
    out.write(kMagic, sizeof(kMagic));
    write_i64(out, static_cast<std::int64_t>(kind));
    for (std::size_t len : cfg.layout.lengths()) write_i64(out, static_cast<std::int64_t>(len));
    write_i64(out, static_cast<std::int64_t>(cfg.d));
    write_i64(out, static_cast<std::int64_t>(cfg.p));
    write_i64(out, static_cast<std::int64_t>(cfg.heads));
    write_i64(out, static_cast<std::int64_t>(cfg.out_dim));
    write_i64(out, static_cast<std::int64_t>(cfg.structure));
}

std::pair<ModelKind, ModelConfig> read_header(std::istream& in) {
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, kMagic, 5) != 0) throw ConfigError("bad checkpoint magic");
    const auto kind = static_cast<ModelKind>(read_i64(in));
    const std::size_t t = static_cast<std::size_t>(read_i64(in));
    const std::size_t v = static_cast<std::size_t>(read_i64(in));
    const std::size_t a = static_cast<std::size_t>(read_i64(in));
    ModelConfig cfg;
    cfg.layout = mask::SegmentLayout(t, v, a);
    cfg.d = static_cast<std::size_t>(read_i64(in));
    cfg.p = static_cast<std::size_t>(read_i64(in));
    cfg.heads = static_cast<std::size_t>(read_i64(in));
    cfg.out_dim = static_cast<std::size_t>(read_i64(in));
    cfg.structure = static_cast<mask::StructureName>(read_i64(in));
    return {kind, cfg};
}

void write_encoder(std::ostream& out, const std::string& prefix, const attn::EncoderWeights& w) {
    write_array(out, prefix + ".w_q", w.w_q);
    write_array(out, prefix + ".w_k", w.w_k);
    write_array(out, prefix + ".w_v", w.w_v);
    write_array(out, prefix + ".w_1", w.w_1);
    write_array(out, prefix + ".w_2", w.w_2);
}

attn::EncoderWeights read_encoder(std::istream& in, const std::string& prefix, std::size_t heads) {
    attn::EncoderWeights w;
    num::Tensor2* slots[5] = {&w.w_q, &w.w_k, &w.w_v, &w.w_1, &w.w_2};
    const char* names[5] = {".w_q", ".w_k", ".w_v", ".w_1", ".w_2"};
    for (int i = 0; i < 5; ++i) {
        auto [name, t] = read_array(in);
        if (name != prefix + names[i]) throw ConfigError("checkpoint array order mismatch: " + name);
        *slots[i] = std::move(t);
    }
    w.heads = heads;
    w.check();
    return w;
}

template <typename F>
void save_to_file(const std::string& path, F&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open checkpoint file for writing: " + path);
    writer(out);
}

} // namespace

std::string to_string(ModelKind k) {
    switch (k) {
    case ModelKind::gsit: return "gsit";
    case ModelKind::mult: return "mult";
    case ModelKind::naive: return "naive";
    }
    return "?";
}

ModelKind model_kind_from_string(std::string_view s) {
    if (s == "gsit") return ModelKind::gsit;
    if (s == "mult") return ModelKind::mult;
    if (s == "naive") return ModelKind::naive;
    throw ConfigError("unknown model kind: " + std::string(s));
}

void save_checkpoint(std::ostream& out, const ModelConfig& cfg, const GsitWeights& w) {
    write_header(out, ModelKind::gsit, cfg);
    write_u32(out, 16); // 3 encoders x 5 arrays + f
    write_encoder(out, "forward", *w.forward);
    write_encoder(out, "backward", *w.backward);
    write_encoder(out, "intra", *w.intra);
    write_array(out, "f", *w.f);
}

void save_checkpoint(std::ostream& out, const ModelConfig& cfg, const MultWeights& w) {
    write_header(out, ModelKind::mult, cfg);
    write_u32(out, 46); // 9 encoders x 5 arrays + f
    for (const auto& [key, enc] : w.cross)
        write_encoder(out,
                      std::string("cross_") + mask::short_name(key.first) + mask::short_name(key.second),
                      *enc);
    for (std::size_t i = 0; i < 3; ++i)
        write_encoder(out, std::string("self_") + mask::short_name(mask::modality_from_index(i)),
                      *w.self_enc[i]);
    write_array(out, "f", *w.f);
}

void save_checkpoint(std::ostream& out, const ModelConfig& cfg, const NaiveWeights& w) {
    write_header(out, ModelKind::naive, cfg);
    write_u32(out, 6);
    write_encoder(out, "enc", *w.enc);
    write_array(out, "f", *w.f);
}

void save_checkpoint_file(const std::string& path, const ModelConfig& cfg, const GsitWeights& w) {
    save_to_file(path, [&](std::ostream& out) { save_checkpoint(out, cfg, w); });
}
void save_checkpoint_file(const std::string& path, const ModelConfig& cfg, const MultWeights& w) {
    save_to_file(path, [&](std::ostream& out) { save_checkpoint(out, cfg, w); });
}
void save_checkpoint_file(const std::string& path, const ModelConfig& cfg, const NaiveWeights& w) {
    save_to_file(path, [&](std::ostream& out) { save_checkpoint(out, cfg, w); });
}

ModelKind peek_checkpoint_kind(std::istream& in) {
    const auto pos = in.tellg();
    const auto [kind, cfg] = read_header(in);
    (void)cfg;
    in.seekg(pos);
    return kind;
}

GsitCheckpoint load_gsit_checkpoint(std::istream& in) {
    const auto [kind, cfg] = read_header(in);
    if (kind != ModelKind::gsit) throw ConfigError("checkpoint does not hold a gsit model");
    if (read_u32(in) != 16) throw ConfigError("unexpected array count");
    GsitWeights w;
    w.forward = std::make_shared<attn::EncoderWeights>(read_encoder(in, "forward", cfg.heads));
    w.backward = std::make_shared<attn::EncoderWeights>(read_encoder(in, "backward", cfg.heads));
    w.intra = std::make_shared<attn::EncoderWeights>(read_encoder(in, "intra", cfg.heads));
    auto [fname, f] = read_array(in);
    if (fname != "f") throw ConfigError("checkpoint array order mismatch: " + fname);
    w.f = std::make_shared<num::Tensor2>(std::move(f));
    return {cfg, std::move(w)};
}

MultCheckpoint load_mult_checkpoint(std::istream& in) {
    const auto [kind, cfg] = read_header(in);
    if (kind != ModelKind::mult) throw ConfigError("checkpoint does not hold a mult model");
    if (read_u32(in) != 46) throw ConfigError("unexpected array count");
    MultWeights w;
    for (Modality i : mask::kModalities)
        for (Modality j : mask::kModalities)
            if (i != j) {
                const std::string prefix =
                    std::string("cross_") + mask::short_name(i) + mask::short_name(j);
                w.cross[{i, j}] =
                    std::make_shared<attn::EncoderWeights>(read_encoder(in, prefix, cfg.heads));
            }
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string prefix =
            std::string("self_") + mask::short_name(mask::modality_from_index(i));
        w.self_enc[i] = std::make_shared<attn::EncoderWeights>(read_encoder(in, prefix, cfg.heads));
    }
    auto [fname, f] = read_array(in);
    if (fname != "f") throw ConfigError("checkpoint array order mismatch: " + fname);
    w.f = std::make_shared<num::Tensor2>(std::move(f));
    return {cfg, std::move(w)};
}

NaiveCheckpoint load_naive_checkpoint(std::istream& in) {
    const auto [kind, cfg] = read_header(in);
    if (kind != ModelKind::naive) throw ConfigError("checkpoint does not hold a naive model");
    if (read_u32(in) != 6) throw ConfigError("unexpected array count");
    NaiveWeights w;
    w.enc = std::make_shared<attn::EncoderWeights>(read_encoder(in, "enc", cfg.heads));
    auto [fname, f] = read_array(in);
    if (fname != "f") throw ConfigError("checkpoint array order mismatch: " + fname);
    w.f = std::make_shared<num::Tensor2>(std::move(f));
    return {cfg, std::move(w)};
}

} // namespace gsit::model
