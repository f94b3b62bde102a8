#include "sense/manifest.hpp"

#include <fstream>

#include "json.hpp"

namespace sense {

void RunManifest::set_config(const std::string& key, const std::string& value) {
    config_[key] = value;
}
void RunManifest::set_config(const std::string& key, double value) {
    config_[key] = format_g9(value);
}
void RunManifest::set_config(const std::string& key, uint64_t value) {
    config_[key] = std::to_string(value);
}
void RunManifest::set_config(const std::string& key, bool value) {
    config_[key] = value ? "true" : "false";
}

void RunManifest::add_input(const std::string& role, const std::string& path) {
    inputs_.emplace_back(role, path);
    digests_[role] = fnv1a64_file(path);
}

void RunManifest::add_output(const std::string& path) { outputs_.push_back(path); }

RunManifest::StageTimer::StageTimer(RunManifest& manifest, std::string stage)
    : manifest_(manifest), stage_(std::move(stage)),
      start_(std::chrono::steady_clock::now()) {}

RunManifest::StageTimer::~StageTimer() {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    double ms = std::chrono::duration<double, std::milli>(elapsed).count();
    manifest_.timings_ms_.emplace_back(stage_, ms);
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["command"] = command_;
    j["seed"] = seed_;
    j["config"] = config_;
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [role, file_path] : inputs_) {
        inputs[role] = {{"path", file_path}, {"fnv1a64", digests_.at(role)}};
    }
    j["inputs"] = inputs;
    j["outputs"] = outputs_;
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [stage, ms] : timings_ms_) timings[stage] = ms;
    j["timings_ms"] = timings;

    std::ofstream out(path);
    if (!out) fail("io", "cannot write manifest '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace sense
