#pragma once

#include "sense/common.hpp"

#include <chrono>
#include <map>
#include <string>
#include <vector>

namespace sense {

// Self-describing record written alongside every command's outputs: the
// resolved configuration, seed, input-file digests, output paths, and
// per-stage wall-clock timings.
class RunManifest {
public:
    explicit RunManifest(std::string command) : command_(std::move(command)) {}

    void set_config(const std::string& key, const std::string& value);
    void set_config(const std::string& key, double value);
    void set_config(const std::string& key, uint64_t value);
    void set_config(const std::string& key, bool value);
    void set_seed(uint64_t seed) { seed_ = seed; }

    // Records the file's FNV-1a digest under its role name ("edges", ...).
    void add_input(const std::string& role, const std::string& path);
    void add_output(const std::string& path);

    class StageTimer {
    public:
        StageTimer(RunManifest& manifest, std::string stage);
        ~StageTimer();
        StageTimer(const StageTimer&) = delete;
        StageTimer& operator=(const StageTimer&) = delete;

    private:
        RunManifest& manifest_;
        std::string stage_;
        std::chrono::steady_clock::time_point start_;
    };
    StageTimer time_stage(std::string stage) { return {*this, std::move(stage)}; }

    void write(const std::string& path) const;

private:
    friend class StageTimer;
    std::string command_;
    uint64_t seed_ = 0;
    std::map<std::string, std::string> config_;
    std::vector<std::pair<std::string, std::string>> inputs_;  // role -> path
    std::map<std::string, std::string> digests_;               // role -> fnv1a64
    std::vector<std::string> outputs_;
    std::vector<std::pair<std::string, double>> timings_ms_;
};

}  // namespace sense
