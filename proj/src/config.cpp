#include "ingrain/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ingrain {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return static_cast<int>(x);
    } catch (...) {
        throw ConfigError("bad integer for " + key + ": '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("bad number for " + key + ": '" + v + "'");
    }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("bad seed for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& v, F item) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(item(key, tok));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "L") L = parse_int(key, v);
    else if (key == "stride") stride = parse_int(key, v);
    else if (key == "missing_rate") missing_rate = parse_double(key, v);
    else if (key == "mask_dist") mask_dist = v;
    else if (key == "train_fraction") train_fraction = parse_double(key, v);
    else if (key == "normalization") normalization = v;
    else if (key == "mask_seed") mask_seed = parse_u64(key, v);
    else if (key == "split_seed") split_seed = parse_u64(key, v);
    else if (key == "embed_dim") embed_dim = parse_int(key, v);
    else if (key == "heads") heads = parse_int(key, v);
    else if (key == "layers") layers = parse_int(key, v);
    else if (key == "hidden_dim") hidden_dim = parse_int(key, v);
    else if (key == "points_per_cycle") points_per_cycle = parse_int(key, v);
    else if (key == "supplement_mode") supplement_mode = v;
    else if (key == "reencode_per_cycle") reencode_per_cycle = parse_bool(key, v);
    else if (key == "no_rnn") no_rnn = parse_bool(key, v);
    else if (key == "lambda_imp") lambda_imp = parse_double(key, v);
    else if (key == "lambda_pre") lambda_pre = parse_double(key, v);
    else if (key == "lambda_vel") lambda_vel = parse_double(key, v);
    else if (key == "lr") lr = parse_double(key, v);
    else if (key == "batch") batch = parse_int(key, v);
    else if (key == "epochs") epochs = parse_int(key, v);
    else if (key == "eval_every") eval_every = parse_int(key, v);
    else if (key == "grad_clip") grad_clip = parse_double(key, v);
    else if (key == "squared_loss") squared_loss = parse_bool(key, v);
    else if (key == "step_per_window") step_per_window = parse_bool(key, v);
    else if (key == "vel_literal") vel_literal = parse_bool(key, v);
    else if (key == "seeds") seeds = parse_list<uint64_t>(key, v, parse_u64);
    else if (key == "walker_count") walker_count = parse_int(key, v);
    else if (key == "points_per_walker") points_per_walker = parse_int(key, v);
    else if (key == "motion") motion = v;
    else if (key == "noise_scale") noise_scale = parse_double(key, v);
    else if (key == "knn_k") knn_k = parse_int(key, v);
    else if (key == "include_sgru") include_sgru = parse_bool(key, v);
    else if (key == "eval_rates") eval_rates = parse_list<double>(key, v, parse_double);
    else if (key == "sweep_axis") sweep_axis = v;
    else if (key == "sweep_values") sweep_values = parse_list<double>(key, v, parse_double);
    else throw ConfigError("unknown config key: " + key);
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

void RunConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (L < 2) fail("L must be >= 2");
    if (stride < 0) fail("stride must be >= 0");
    if (missing_rate < 0.0 || missing_rate >= 1.0) fail("missing_rate must be in [0,1)");
    if (mask_dist != "uniform" && mask_dist != "poisson") fail("mask_dist must be uniform or poisson");
    if (train_fraction <= 0.0 || train_fraction >= 1.0) fail("train_fraction must be in (0,1)");
    if (normalization != "none" && normalization != "minmax")
        fail("normalization must be none or minmax");
    if (embed_dim < 2) fail("embed_dim must be >= 2");
    if (heads < 1) fail("heads must be >= 1");
    if (embed_dim % heads != 0) fail("embed_dim must be divisible by heads");
    if (layers < 1) fail("layers must be >= 1");
    if (hidden_dim < 1) fail("hidden_dim must be >= 1");
    if (points_per_cycle < 1) fail("points_per_cycle must be >= 1");
    if (supplement_mode != "replace" && supplement_mode != "add")
        fail("supplement_mode must be replace or add");
    if (lambda_imp < 0 || lambda_pre < 0 || lambda_vel < 0) fail("lambdas must be >= 0");
    if (lambda_imp == 0 && lambda_pre == 0 && lambda_vel == 0) fail("lambdas must not all be zero");
    if (lr <= 0) fail("lr must be > 0");
    if (batch < 1) fail("batch must be >= 1");
    if (epochs < 0) fail("epochs must be >= 0");
    if (eval_every < 1) fail("eval_every must be >= 1");
    if (grad_clip < 0) fail("grad_clip must be >= 0");
    if (seeds.empty()) fail("seeds must be nonempty");
    if (walker_count < 0) fail("walker_count must be >= 0");
    if (points_per_walker < 1) fail("points_per_walker must be >= 1");
    if (motion != "smooth" && motion != "loop") fail("motion must be smooth or loop");
    if (noise_scale <= 0) fail("noise_scale must be > 0");
    if (knn_k < 1) fail("knn_k must be >= 1");
    for (double r : eval_rates)
        if (r < 0.0 || r >= 1.0) fail("eval_rates entries must be in [0,1)");
    if (!sweep_axis.empty()) {
        static const std::vector<std::string> axes = {
            "points_per_cycle", "L",          "heads",      "embed_dim",  "hidden_dim",
            "lambda_imp",       "lambda_pre", "lambda_vel", "missing_rate"};
        if (std::find(axes.begin(), axes.end(), sweep_axis) == axes.end())
            fail("unsupported sweep_axis: " + sweep_axis);
        if (sweep_values.empty()) fail("sweep_values required when sweep_axis is set");
        if (sweep_axis.rfind("lambda_", 0) == 0)
            for (double x : sweep_values)
                if (x == 0.0) fail("sweep over " + sweep_axis + " excludes 0 (ablation semantics)");
    }
}

std::string RunConfig::serialize() const {
    std::ostringstream o;
    o << "L = " << L << "\n";
    o << "stride = " << stride << "\n";
    o << "missing_rate = " << fmt(missing_rate) << "\n";
    o << "mask_dist = " << mask_dist << "\n";
    o << "train_fraction = " << fmt(train_fraction) << "\n";
    o << "normalization = " << normalization << "\n";
    o << "mask_seed = " << mask_seed << "\n";
    o << "split_seed = " << split_seed << "\n";
    o << "embed_dim = " << embed_dim << "\n";
    o << "heads = " << heads << "\n";
    o << "layers = " << layers << "\n";
    o << "hidden_dim = " << hidden_dim << "\n";
    o << "points_per_cycle = " << points_per_cycle << "\n";
    o << "supplement_mode = " << supplement_mode << "\n";
    o << "reencode_per_cycle = " << (reencode_per_cycle ? "true" : "false") << "\n";
    o << "no_rnn = " << (no_rnn ? "true" : "false") << "\n";
    o << "lambda_imp = " << fmt(lambda_imp) << "\n";
    o << "lambda_pre = " << fmt(lambda_pre) << "\n";
    o << "lambda_vel = " << fmt(lambda_vel) << "\n";
    o << "lr = " << fmt(lr) << "\n";
    o << "batch = " << batch << "\n";
    o << "epochs = " << epochs << "\n";
    o << "eval_every = " << eval_every << "\n";
    o << "grad_clip = " << fmt(grad_clip) << "\n";
    o << "squared_loss = " << (squared_loss ? "true" : "false") << "\n";
    o << "step_per_window = " << (step_per_window ? "true" : "false") << "\n";
    o << "vel_literal = " << (vel_literal ? "true" : "false") << "\n";
    o << "seeds = ";
    for (size_t i = 0; i < seeds.size(); ++i) o << (i ? "," : "") << seeds[i];
    o << "\n";
    o << "walker_count = " << walker_count << "\n";
    o << "points_per_walker = " << points_per_walker << "\n";
    o << "motion = " << motion << "\n";
    o << "noise_scale = " << fmt(noise_scale) << "\n";
    o << "knn_k = " << knn_k << "\n";
    o << "include_sgru = " << (include_sgru ? "true" : "false") << "\n";
    if (!eval_rates.empty()) {
        o << "eval_rates = ";
        for (size_t i = 0; i < eval_rates.size(); ++i) o << (i ? "," : "") << fmt(eval_rates[i]);
        o << "\n";
    }
    if (!sweep_axis.empty()) {
        o << "sweep_axis = " << sweep_axis << "\n";
        o << "sweep_values = ";
        for (size_t i = 0; i < sweep_values.size(); ++i) o << (i ? "," : "") << fmt(sweep_values[i]);
        o << "\n";
    }
    return o.str();
}

MaskDistribution RunConfig::mask_distribution() const {
    return mask_dist == "poisson" ? MaskDistribution::Poisson : MaskDistribution::Uniform;
}

ForwardConfig RunConfig::forward_config() const {
    ForwardConfig f;
    f.model.embed_dim = embed_dim;
    f.model.heads = heads;
    f.model.layers = layers;
    f.model.hidden_dim = hidden_dim;
    f.points_per_cycle = points_per_cycle;
    f.reencode_per_cycle = reencode_per_cycle;
    f.supplement = supplement_mode == "add" ? SupplementMode::Add : SupplementMode::Replace;
    f.no_rnn = no_rnn;
    return f;
}

LossConfig RunConfig::loss_config() const {
    LossConfig l;
    l.weights = LossWeights{lambda_imp, lambda_pre, lambda_vel};
    l.squared_loss = squared_loss;
    l.vel_literal = vel_literal;
    return l;
}

TrainConfig RunConfig::train_config(uint64_t seed) const {
    TrainConfig t;
    t.forward = forward_config();
    t.loss = loss_config();
    t.adam.lr = lr;
    t.batch_size = batch;
    t.epochs = epochs;
    t.step_per_window = step_per_window;
    t.grad_clip = grad_clip;
    t.eval_every = eval_every;
    t.seed = seed;
    return t;
}

}  // namespace ingrain
