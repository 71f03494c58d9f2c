#include "ingrain/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace ingrain {

namespace {

constexpr char kMagic[8] = {'I', 'N', 'G', 'R', 'A', 'I', 'N', 'M'};
constexpr uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "model file writer assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T x) {
    out.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& what) {
    T x{};
    in.read(reinterpret_cast<char*>(&x), sizeof(T));
    if (!in) throw FormatError("model file truncated reading " + what);
    return x;
}

}  // namespace

void save_model(const std::string& path, const ParamStore& params,
                const std::string& config_echo) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write model file " + path);
    out.write(kMagic, sizeof(kMagic));
    put<uint32_t>(out, kVersion);
    put<uint64_t>(out, config_echo.size());
    out.write(config_echo.data(), static_cast<std::streamsize>(config_echo.size()));
    put<uint32_t>(out, static_cast<uint32_t>(params.count()));
    for (int i = 0; i < params.count(); ++i) {
        const ParamStore::Entry& e = params.entry(i);
        put<uint32_t>(out, static_cast<uint32_t>(e.name.size()));
        out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        put<uint32_t>(out, static_cast<uint32_t>(e.value.rows));
        put<uint32_t>(out, static_cast<uint32_t>(e.value.cols));
        out.write(reinterpret_cast<const char*>(e.value.v.data()),
                  static_cast<std::streamsize>(e.value.size() * sizeof(double)));
    }
    if (!out) throw FormatError("write failed: " + path);
}

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open model file " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw FormatError("not an INGRAIN model file: " + path);
    const auto version = get<uint32_t>(in, "version");
    if (version != kVersion)
        throw FormatError("unsupported model format version " + std::to_string(version));
    const auto echo_len = get<uint64_t>(in, "config length");
    LoadedModel m;
    m.config_echo.resize(echo_len);
    in.read(m.config_echo.data(), static_cast<std::streamsize>(echo_len));
    if (!in) throw FormatError("model file truncated reading config echo");
    const auto count = get<uint32_t>(in, "parameter count");
    for (uint32_t i = 0; i < count; ++i) {
        const auto name_len = get<uint32_t>(in, "name length");
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const auto rows = get<uint32_t>(in, "rows");
        const auto cols = get<uint32_t>(in, "cols");
        Matrix v(static_cast<int>(rows), static_cast<int>(cols));
        in.read(reinterpret_cast<char*>(v.v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!in) throw FormatError("model file truncated reading " + name);
        m.params.add(name, std::move(v));
    }
    return m;
}

}  // namespace ingrain
