#pragma once

// Command-line front end. dispatch() takes the arguments after the program
// name and reports through the given streams, so it can be driven in-process.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ept::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// FNV-1a 64-bit hash, rendered as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

struct RunManifest {
    std::vector<std::string> argv;  // without the program name
    std::string command;
    std::map<std::string, std::string> input_hashes;
    std::vector<std::string> outputs;
    nlohmann::json params = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    std::string version;
    double duration_seconds = 0.0;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& doc);
};

std::string version();

}  // namespace ept::cli
