#include "h4/report.hpp"

#include <fstream>
#include <sstream>

#include "h4/errors.hpp"

namespace h4 {

std::string fnv1a_digest(const std::string& bytes) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fnv1a_digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return fnv1a_digest(ss.str());
}

void Report::add_input_file(const std::string& path) {
    inputs_.push_back({path, fnv1a_digest_file(path)});
}

std::string Report::to_json_text(const std::string& status) const {
    nlohmann::json doc;
    doc["command"] = argv_;
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& [path, digest] : inputs_) {
        nlohmann::json entry;
        entry["digest"] = digest;
        entry["path"] = path;
        inputs.push_back(entry);
    }
    doc["inputs"] = inputs;
    doc["results"] = results_;
    doc["status"] = status;
    return doc.dump(2) + "\n";
}

}  // namespace h4
