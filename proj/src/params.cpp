#include "ingrain/params.hpp"

#include <cmath>

#include "ingrain/rng.hpp"

namespace ingrain {

int ParamStore::add(const std::string& name, Matrix init) {
    if (index_.count(name)) throw ContractError("duplicate parameter " + name);
    const int id = static_cast<int>(entries_.size());
    Matrix m1(init.rows, init.cols), m2(init.rows, init.cols);
    entries_.push_back(Entry{name, std::move(init), std::move(m1), std::move(m2)});
    index_[name] = id;
    return id;
}

int ParamStore::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ContractError("unknown parameter " + name);
    return it->second;
}

GradSet::GradSet(const ParamStore& store) {
    grads.reserve(store.count());
    for (int i = 0; i < store.count(); ++i) {
        const Matrix& v = store.entry(i).value;
        grads.emplace_back(v.rows, v.cols);
    }
}

void GradSet::add_scaled(const GradSet& other, double c) {
    for (size_t i = 0; i < grads.size(); ++i)
        for (size_t j = 0; j < grads[i].size(); ++j) grads[i].v[j] += c * other.grads[i].v[j];
}

void GradSet::scale(double c) {
    for (Matrix& g : grads)
        for (double& e : g.v) e *= c;
}

double GradSet::global_norm() const {
    double s = 0.0;
    for (const Matrix& g : grads)
        for (double e : g.v) s += e * e;
    return std::sqrt(s);
}

void GradSet::clip_global_norm(double max_norm) {
    if (max_norm <= 0.0) return;
    const double n = global_norm();
    if (n > max_norm) scale(max_norm / n);
}

void adam_step(ParamStore& store, const GradSet& grads, AdamState& state,
               const AdamConfig& cfg) {
    state.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (int i = 0; i < store.count(); ++i) {
        ParamStore::Entry& e = store.entry(i);
        const Matrix& g = grads.grads[i];
        if (!e.value.same_shape(g))
            throw DimensionError("adam_step: grad " + g.shape_str() + " vs param " +
                                 e.value.shape_str());
        for (size_t j = 0; j < e.value.size(); ++j) {
            e.m1.v[j] = cfg.beta1 * e.m1.v[j] + (1.0 - cfg.beta1) * g.v[j];
            e.m2.v[j] = cfg.beta2 * e.m2.v[j] + (1.0 - cfg.beta2) * g.v[j] * g.v[j];
            const double mhat = e.m1.v[j] / bc1;
            const double vhat = e.m2.v[j] / bc2;
            e.value.v[j] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
    }
}

Bound::Bound(Tape& tape, const ParamStore& store) : tape_(&tape), store_(&store) {
    vars_.reserve(store.count());
    for (int i = 0; i < store.count(); ++i) vars_.push_back(tape.constant(store.entry(i).value));
}

Var Bound::operator[](const std::string& name) const { return vars_[store_->find(name)]; }

GradSet Bound::gradients() const {
    GradSet gs(*store_);
    for (int i = 0; i < store_->count(); ++i) {
        const Matrix& g = tape_->grad(vars_[i]);
        if (g.size() == gs.grads[i].size()) gs.grads[i] = g;
    }
    return gs;
}

Matrix init_linear(int rows, int cols, uint64_t seed) {
    Rng rng(seed);
    const double bound = std::sqrt(1.0 / rows);
    Matrix m(rows, cols);
    for (double& e : m.v) e = rng.uniform(-bound, bound);
    return m;
}

void ModelConfig::validate() const {
    if (embed_dim < 2) throw ContractError("embed_dim must be >= 2");
    if (heads < 1) throw ContractError("heads must be >= 1");
    if (embed_dim % heads != 0) throw ContractError("embed_dim must be divisible by heads");
    if (layers < 1) throw ContractError("layers must be >= 1");
    if (hidden_dim < 1) throw ContractError("hidden_dim must be >= 1");
}

namespace {

struct Builder {
    ParamStore& s;
    uint64_t seed;
    int counter = 0;

    void linear(const std::string& name, int rows, int cols) {
        s.add(name, init_linear(rows, cols, mix_seed(seed, counter++)));
    }
    void zeros(const std::string& name, int rows, int cols) {
        s.add(name, Matrix::zeros(rows, cols));
        ++counter;
    }
    void norm(const std::string& prefix, int dim) {
        s.add(prefix + ".gain", Matrix::filled(1, dim, 1.0));
        s.add(prefix + ".bias", Matrix::zeros(1, dim));
        counter += 2;
    }
    void attention(const std::string& prefix, const ModelConfig& cfg) {
        const int dk = cfg.head_dim();
        for (int h = 0; h < cfg.heads; ++h) {
            const std::string hp = prefix + ".h" + std::to_string(h);
            linear(hp + ".Wq", cfg.embed_dim, dk);
            linear(hp + ".Wk", cfg.embed_dim, dk);
            linear(hp + ".Wv", cfg.embed_dim, dk);
        }
        linear(prefix + ".Wo", cfg.heads * dk, cfg.embed_dim);
    }
    void feed_forward(const std::string& prefix, const ModelConfig& cfg) {
        linear(prefix + ".W1", cfg.embed_dim, cfg.ff_dim());
        zeros(prefix + ".b1", 1, cfg.ff_dim());
        linear(prefix + ".W2", cfg.ff_dim(), cfg.embed_dim);
        zeros(prefix + ".b2", 1, cfg.embed_dim);
    }
};

}  // namespace

ParamStore make_model_params(const ModelConfig& cfg, uint64_t seed) {
    cfg.validate();
    ParamStore store;
    Builder b{store, seed};
    const int D = cfg.embed_dim;
    const int H = cfg.hidden_dim;

    b.linear("embed.W_obs", 2, D);
    b.linear("embed.W_mis", 2, D);

    for (int l = 0; l < cfg.layers; ++l) {
        const std::string p = "enc" + std::to_string(l);
        b.attention(p + ".self", cfg);
        b.norm(p + ".norm1", D);
        b.feed_forward(p + ".ff", cfg);
        b.norm(p + ".norm2", D);
    }
    for (int l = 0; l < cfg.layers; ++l) {
        const std::string p = "dec" + std::to_string(l);
        b.attention(p + ".self", cfg);
        b.norm(p + ".norm1", D);
        b.attention(p + ".cross", cfg);
        b.norm(p + ".norm2", D);
        b.feed_forward(p + ".ff", cfg);
        b.norm(p + ".norm3", D);
    }

    b.linear("impute.W", D, 2);
    b.zeros("impute.b", 1, 2);

    b.linear("gru.Wfx", D, H);
    b.linear("gru.Wfh", H, H);
    b.zeros("gru.bf", 1, H);
    b.linear("gru.Wrx", D, H);
    b.linear("gru.Wrh", H, H);
    b.zeros("gru.br", 1, H);
    b.linear("gru.Wcx", D, H);
    b.linear("gru.Wch", H, H);
    b.zeros("gru.bc", 1, H);

    b.linear("pred.W", H, 2);
    b.zeros("pred.b", 1, 2);
    b.linear("nornn.W", D, 2);
    b.zeros("nornn.b", 1, 2);
    return store;
}

}  // namespace ingrain
