#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ingrain/matrix.hpp"
#include "ingrain/tape.hpp"

namespace ingrain {

/// Named trainable parameters with Adam moment buffers. Declaration order is
/// the serialization order of the model file.
class ParamStore {
public:
    struct Entry {
        std::string name;
        Matrix value;
        Matrix m1;  // Adam first moment
        Matrix m2;  // Adam second moment
    };

    int add(const std::string& name, Matrix init);
    int find(const std::string& name) const;
    Entry& entry(int i) { return entries_[i]; }
    const Entry& entry(int i) const { return entries_[i]; }
    Matrix& value(const std::string& name) { return entries_[find(name)].value; }
    const Matrix& value(const std::string& name) const { return entries_[find(name)].value; }
    int count() const { return static_cast<int>(entries_.size()); }

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, int> index_;
};

/// Gradient accumulator matching a ParamStore's layout.
struct GradSet {
    std::vector<Matrix> grads;

    explicit GradSet(const ParamStore& store);
    void add_scaled(const GradSet& other, double c);
    void scale(double c);
    double global_norm() const;
    void clip_global_norm(double max_norm);
};

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Per-store optimizer state (step count; moments live in the store).
struct AdamState {
    int64_t step = 0;
};

void adam_step(ParamStore& store, const GradSet& grads, AdamState& state,
               const AdamConfig& cfg);

/// All parameters of one tape registered as leaf nodes, addressable by name.
class Bound {
public:
    Bound(Tape& tape, const ParamStore& store);
    Var operator[](const std::string& name) const;
    /// Collects per-parameter gradients after tape.backward().
    GradSet gradients() const;
    Tape& tape() const { return *tape_; }

private:
    Tape* tape_;
    const ParamStore* store_;
    std::vector<Var> vars_;
};

/// uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)); fan_in = rows
Matrix init_linear(int rows, int cols, uint64_t seed);

struct ModelConfig {
    int embed_dim = 256;
    int heads = 2;
    int layers = 2;
    int hidden_dim = 256;
    int ff_multiplier = 4;

    int head_dim() const { return embed_dim / heads; }
    int ff_dim() const { return embed_dim * ff_multiplier; }
    void validate() const;
};

/// Builds the full parameter set (embedding, encoder/decoder stacks, impute
/// head, GRU, prediction heads) in declaration order.
ParamStore make_model_params(const ModelConfig& cfg, uint64_t seed);

}  // namespace ingrain
