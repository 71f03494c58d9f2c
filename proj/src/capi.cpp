#include "ingrain.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "ingrain/runner.hpp"

namespace {

thread_local std::string g_last_error;

template <typename F>
int guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return INGRAIN_OK;
    } catch (const ingrain::ConfigError& e) {
        g_last_error = e.what();
        return INGRAIN_ERR_CONFIG;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return INGRAIN_ERR_RUNTIME;
    }
}

}  // namespace

struct ingrain_config {
    ingrain::RunConfig cfg;
};

extern "C" {

int ingrain_config_create(ingrain_config** out) {
    if (!out) {
        g_last_error = "null output pointer";
        return INGRAIN_ERR_CONFIG;
    }
    return guarded([&] { *out = new ingrain_config(); });
}

int ingrain_config_load(const char* path, ingrain_config** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return INGRAIN_ERR_CONFIG;
    }
    return guarded([&] { *out = new ingrain_config{ingrain::RunConfig::load(path)}; });
}

int ingrain_config_set(ingrain_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        g_last_error = "null argument";
        return INGRAIN_ERR_CONFIG;
    }
    return guarded([&] { cfg->cfg.set(key, value); });
}

int ingrain_config_validate(const ingrain_config* cfg) {
    if (!cfg) {
        g_last_error = "null config";
        return INGRAIN_ERR_CONFIG;
    }
    return guarded([&] { cfg->cfg.validate(); });
}

void ingrain_config_destroy(ingrain_config* cfg) { delete cfg; }

int ingrain_synth(const ingrain_config* cfg, const char* out_csv) {
    if (!cfg || !out_csv) {
        g_last_error = "null argument";
        return INGRAIN_ERR_CONFIG;
    }
    return guarded([&] { ingrain::run_synth(cfg->cfg, out_csv); });
}

int ingrain_train(const ingrain_config* cfg, const char* data_csv, const char* out_dir,
                  char** summary_out) {
    if (!cfg || !data_csv || !out_dir) {
        g_last_error = "null argument";
        return INGRAIN_ERR_CONFIG;
    }
    return guarded([&] {
        const std::string summary = ingrain::run_train(cfg->cfg, data_csv, out_dir);
        if (summary_out) {
            *summary_out = static_cast<char*>(std::malloc(summary.size() + 1));
            std::memcpy(*summary_out, summary.c_str(), summary.size() + 1);
        }
    });
}

int ingrain_eval(const ingrain_config* cfg, const char* model_path, const char* data_csv,
                 const char* out_csv) {
    if (!cfg || !model_path || !data_csv || !out_csv) {
        g_last_error = "null argument";
        return INGRAIN_ERR_CONFIG;
    }
    return guarded([&] { ingrain::run_eval(cfg->cfg, model_path, data_csv, out_csv); });
}

int ingrain_sweep(const ingrain_config* cfg, const char* data_csv, const char* out_dir) {
    if (!cfg || !data_csv || !out_dir) {
        g_last_error = "null argument";
        return INGRAIN_ERR_CONFIG;
    }
    return guarded([&] { ingrain::run_sweep(cfg->cfg, data_csv, out_dir); });
}

const char* ingrain_last_error(void) { return g_last_error.c_str(); }

void ingrain_free(char* p) { std::free(p); }

}  // extern "C"
