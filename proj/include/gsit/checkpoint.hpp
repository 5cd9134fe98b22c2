#ifndef GSIT_CHECKPOINT_HPP
#define GSIT_CHECKPOINT_HPP

#include <iosfwd>
#include <string>

#include "gsit/models.hpp"

namespace gsit::model {

enum class ModelKind : int { gsit = 0, mult = 1, naive = 2 };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(std::string_view s); // throws ConfigError

// Flat binary container: magic "GSIT1", little-endian int64 config fields
// (kind, T_t, T_v, T_a, d, p, heads, out_dim, structure), then named f64
// arrays in declaration order.
void save_checkpoint(std::ostream& out, const ModelConfig& cfg, const GsitWeights& w);
void save_checkpoint(std::ostream& out, const ModelConfig& cfg, const MultWeights& w);
void save_checkpoint(std::ostream& out, const ModelConfig& cfg, const NaiveWeights& w);

void save_checkpoint_file(const std::string& path, const ModelConfig& cfg, const GsitWeights& w);
void save_checkpoint_file(const std::string& path, const ModelConfig& cfg, const MultWeights& w);
void save_checkpoint_file(const std::string& path, const ModelConfig& cfg, const NaiveWeights& w);

struct GsitCheckpoint {
    ModelConfig config;
    GsitWeights weights;
};
struct MultCheckpoint {
    ModelConfig config;
    MultWeights weights;
};
struct NaiveCheckpoint {
    ModelConfig config;
    NaiveWeights weights;
};

ModelKind peek_checkpoint_kind(std::istream& in); // rewinds the stream
GsitCheckpoint load_gsit_checkpoint(std::istream& in);
MultCheckpoint load_mult_checkpoint(std::istream& in);
NaiveCheckpoint load_naive_checkpoint(std::istream& in);

} // namespace gsit::model

#endif
