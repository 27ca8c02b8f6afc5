#include "triage/manifest.hpp"

#include <json.hpp>

#include "triage/io.hpp"
#include "triage/text.hpp"

namespace triage {

RunManifest::RunManifest(std::string subcommand, std::string version)
    : subcommand_(std::move(subcommand)), version_(std::move(version)) {}

void RunManifest::set_config(const std::string& key, const std::string& value) {
    config_[key] = value;
}

void RunManifest::set_config(const std::string& key, double value) {
    config_[key] = text::format_double(value);
}

void RunManifest::set_config(const std::string& key, long long value) {
    config_[key] = std::to_string(value);
}

void RunManifest::set_result(const std::string& key, const std::string& value) {
    results_[key] = value;
}

void RunManifest::set_result(const std::string& key, double value) {
    results_[key] = text::format_double(value);
}

void RunManifest::add_input(const std::filesystem::path& path) {
    inputs_.emplace_back(path.string(), io::digest_file(path));
}

void RunManifest::add_output(const std::filesystem::path& path) {
    outputs_.emplace_back(path.string(), io::digest_file(path));
}

void RunManifest::set_duration_seconds(double seconds) { duration_seconds_ = seconds; }

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["tool"] = "triage";
    j["version"] = version_;
    j["subcommand"] = subcommand_;
    j["config"] = nlohmann::json::object();
    for (const auto& [key, value] : config_) j["config"][key] = value;
    j["results"] = nlohmann::json::object();
    for (const auto& [key, value] : results_) j["results"][key] = value;
    auto files = [](const std::vector<std::pair<std::string, std::string>>& list) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [path, digest] : list)
            arr.push_back({{"path", path}, {"digest", digest}});
        return arr;
    };
    j["inputs"] = files(inputs_);
    j["outputs"] = files(outputs_);
    j["duration_seconds"] = duration_seconds_;
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::filesystem::path& path) const {
    io::atomic_write(path, to_json());
}

bool RunManifest::verify_outputs(const std::filesystem::path& manifest_path) {
    nlohmann::json j = nlohmann::json::parse(io::read_file(manifest_path));
    for (const auto& entry : j.at("outputs")) {
        std::filesystem::path p(entry.at("path").get<std::string>());
        if (!std::filesystem::exists(p)) return false;
        if (io::digest_file(p) != entry.at("digest").get<std::string>()) return false;
    }
    return true;
}

}  // namespace triage
