#include <cstdio>

#include "ept/cli.hpp"
#include "ept/error.hpp"

namespace ept::cli {

std::string version() { return EPT_LAB_VERSION; }

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json doc;
    doc["format"] = "ept-lab-manifest";
    doc["argv"] = argv;
    doc["command"] = command;
    doc["inputs"] = nlohmann::json::object();
    for (const auto& [path, hash] : input_hashes) doc["inputs"][path] = "fnv1a64:" + hash;
    doc["outputs"] = outputs;
    doc["params"] = params;
    doc["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    doc["version"] = version;
    doc["duration_seconds"] = duration_seconds;
    return doc;
}

RunManifest RunManifest::from_json(const nlohmann::json& doc) {
    try {
        if (doc.value("format", "") != "ept-lab-manifest") throw Error("not an ept-lab manifest");
        RunManifest m;
        m.argv = doc.at("argv").get<std::vector<std::string>>();
        m.command = doc.value("command", "");
        if (doc.contains("inputs"))
            for (const auto& [path, tagged] : doc["inputs"].items()) {
                std::string hash = tagged.get<std::string>();
                const std::string prefix = "fnv1a64:";
                if (hash.rfind(prefix, 0) == 0) hash.erase(0, prefix.size());
                m.input_hashes[path] = hash;
            }
        if (doc.contains("outputs")) m.outputs = doc["outputs"].get<std::vector<std::string>>();
        if (doc.contains("params")) m.params = doc["params"];
        if (doc.contains("seed") && !doc["seed"].is_null()) m.seed = doc["seed"].get<std::uint64_t>();
        m.version = doc.value("version", "");
        m.duration_seconds = doc.value("duration_seconds", 0.0);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed manifest: ") + e.what());
    }
}

}  // namespace ept::cli
