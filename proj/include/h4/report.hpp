#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace h4 {

/// Canonical command report: echoes the invocation, digests every input file,
/// and carries the results. Byte-stable for identical inputs (sorted keys, no
/// timestamps).
class Report {
public:
    Report(std::vector<std::string> argv) : argv_(std::move(argv)) {}

    void add_input_file(const std::string& path);
    nlohmann::json& results() { return results_; }

    std::string to_json_text(const std::string& status = "ok") const;

private:
    std::vector<std::string> argv_;
    std::vector<std::pair<std::string, std::string>> inputs_;  // (path, digest)
    nlohmann::json results_ = nlohmann::json::object();
};

/// FNV-1a 64-bit digest, hex-encoded.
std::string fnv1a_digest(const std::string& bytes);
std::string fnv1a_digest_file(const std::string& path);

}  // namespace h4
