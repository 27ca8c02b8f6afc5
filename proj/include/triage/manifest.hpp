#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace triage {

/// Record of one CLI run: resolved configuration, input digests, and the
/// produced artifacts. Written as JSON next to the outputs.
class RunManifest {
public:
    RunManifest(std::string subcommand, std::string version);

    void set_config(const std::string& key, const std::string& value);
    void set_config(const std::string& key, double value);
    void set_config(const std::string& key, long long value);
    void set_result(const std::string& key, const std::string& value);
    void set_result(const std::string& key, double value);
    void add_input(const std::filesystem::path& path);   // digests the file now
    void add_output(const std::filesystem::path& path);  // digests the file now
    void set_duration_seconds(double seconds);

    const std::vector<std::pair<std::string, std::string>>& outputs() const { return outputs_; }

    std::string to_json() const;
    void write(const std::filesystem::path& path) const;

    /// True when every listed output exists and still matches its digest.
    static bool verify_outputs(const std::filesystem::path& manifest_path);

private:
    std::string subcommand_;
    std::string version_;
    std::map<std::string, std::string> config_;
    std::map<std::string, std::string> results_;
    std::vector<std::pair<std::string, std::string>> inputs_;   // (path, digest)
    std::vector<std::pair<std::string, std::string>> outputs_;  // (path, digest)
    double duration_seconds_ = 0.0;
};

}  // namespace triage
