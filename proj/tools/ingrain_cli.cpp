// Command-line front end; links only the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ingrain.h"

namespace {

struct ConfigHandle {
    ingrain_config* cfg = nullptr;
    ~ConfigHandle() { ingrain_config_destroy(cfg); }
};

int fail(int code) {
    std::fprintf(stderr, "error: %s\n", ingrain_last_error());
    return code;
}

int build_config(const std::string& config_path, const std::vector<std::string>& sets,
                 long long seed_override, ConfigHandle& handle) {
    int rc = config_path.empty() ? ingrain_config_create(&handle.cfg)
                                 : ingrain_config_load(config_path.c_str(), &handle.cfg);
    if (rc != INGRAIN_OK) return rc;
    for (const std::string& kv : sets) {
        const size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return INGRAIN_ERR_CONFIG;
        }
        rc = ingrain_config_set(handle.cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        if (rc != INGRAIN_OK) return rc;
    }
    if (seed_override >= 0) {
        rc = ingrain_config_set(handle.cfg, "seeds", std::to_string(seed_override).c_str());
        if (rc != INGRAIN_OK) return rc;
    }
    return ingrain_config_validate(handle.cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"INGRAIN trajectory imputation and next-location prediction"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    long long seed = -1;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--set", sets, "override a config key (key=value), repeatable");
    app.add_option("--seed", seed, "replace the seeds list with a single seed");

    std::string out_path, data_path, model_path;
    CLI::App* synth = app.add_subcommand("synth", "write a synthetic trajectory CSV");
    synth->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* train = app.add_subcommand("train", "train per configured seed");
    train->add_option("--data", data_path, "input trajectory CSV")->required();
    train->add_option("--out", out_path, "output directory")->required();

    CLI::App* eval = app.add_subcommand("eval", "evaluate a model and the baselines");
    eval->add_option("--model", model_path, "trained model file")->required();
    eval->add_option("--data", data_path, "input trajectory CSV")->required();
    eval->add_option("--out", out_path, "metrics CSV path")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "train/evaluate along one hyperparameter axis");
    sweep->add_option("--data", data_path, "input trajectory CSV")->required();
    sweep->add_option("--out", out_path, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : INGRAIN_ERR_CONFIG;
    }

    ConfigHandle handle;
    int rc = build_config(config_path, sets, seed, handle);
    if (rc != INGRAIN_OK) return fail(rc);

    if (synth->parsed()) {
        rc = ingrain_synth(handle.cfg, out_path.c_str());
        if (rc != INGRAIN_OK) return fail(rc);
        std::printf("wrote %s\n", out_path.c_str());
    } else if (train->parsed()) {
        char* summary = nullptr;
        rc = ingrain_train(handle.cfg, data_path.c_str(), out_path.c_str(), &summary);
        if (rc != INGRAIN_OK) return fail(rc);
        std::printf("%s", summary);
        ingrain_free(summary);
    } else if (eval->parsed()) {
        rc = ingrain_eval(handle.cfg, model_path.c_str(), data_path.c_str(), out_path.c_str());
        if (rc != INGRAIN_OK) return fail(rc);
        std::printf("wrote %s\n", out_path.c_str());
    } else if (sweep->parsed()) {
        rc = ingrain_sweep(handle.cfg, data_path.c_str(), out_path.c_str());
        if (rc != INGRAIN_OK) return fail(rc);
        std::printf("wrote %s/sweep.csv\n", out_path.c_str());
    }
    return 0;
}
