#pragma once

#include <string>

#include "ingrain/params.hpp"

namespace ingrain {

/// Thrown when a model file is malformed or its echoed configuration does not
/// match the shapes the caller expects.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Versioned binary: magic, format version, config echo, then parameter
/// arrays in declaration order as little-endian float64 with shape headers.
void save_model(const std::string& path, const ParamStore& params,
                const std::string& config_echo);

struct LoadedModel {
    ParamStore params;
    std::string config_echo;
};

LoadedModel load_model(const std::string& path);

}  // namespace ingrain
