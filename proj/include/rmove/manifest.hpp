#pragma once

// Needs OpenSSL's libcrypto; link rmove_pipeline rather than rmove.

#include <openssl/evp.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rmove/embedding.hpp"
#include "rmove/error.hpp"

namespace rmove {

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorKind::Io, "SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

inline std::string file_sha256(const std::string& path) { return sha256_hex(read_file(path)); }

struct StageRecord {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::map<std::string, std::string> inputs, outputs; // path -> sha256

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

/// Per-directory record of what each stage read and wrote. Paths are kept as
/// given, relative to the directory when they live inside it.
struct Manifest {
    std::map<std::string, StageRecord> stages;

    static constexpr const char* kFile = "manifest.json";

    /// Last recorded output hash of `path`, with the stage that wrote it.
    const std::pair<const std::string, StageRecord>* writer_of(const std::string& path) const {
        for (const auto& kv : stages)
            if (kv.second.outputs.count(path)) return &kv;
        return nullptr;
    }

    /// Inputs whose current hash differs from what the writing stage recorded.
    std::vector<std::string> stale(const std::map<std::string, std::string>& inputs) const {
        std::vector<std::string> out;
        for (const auto& [path, hash] : inputs)
            if (const auto* w = writer_of(path); w && w->second.outputs.at(path) != hash)
                out.push_back(path + " (written by " + w->first + ")");
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [name, s] : stages)
            j[name] = {{"seed", s.seed}, {"config_hash", s.config_hash}, {"inputs", s.inputs}, {"outputs", s.outputs}};
        return {{"stages", j}};
    }

    static Manifest from_json(const nlohmann::json& j) {
        Manifest m;
        for (const auto& [name, s] : j.at("stages").items())
            m.stages[name] = {s.at("seed").get<std::uint64_t>(), s.at("config_hash").get<std::string>(),
                              s.at("inputs").get<std::map<std::string, std::string>>(),
                              s.at("outputs").get<std::map<std::string, std::string>>()};
        return m;
    }

    static Manifest load(const std::filesystem::path& dir) {
        const auto p = dir / kFile;
        if (!std::filesystem::exists(p)) return {};
        try {
            return from_json(nlohmann::json::parse(read_file(p.string())));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::BadFormat, p.string() + ": " + e.what());
        }
    }

    void save(const std::filesystem::path& dir) const {
        write_file((dir / kFile).string(), to_json().dump(2) + "\n");
    }
};

} // namespace rmove
