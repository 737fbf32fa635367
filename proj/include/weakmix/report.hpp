// report.hpp — experiment report container with JSON/CSV emission.

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace weakmix {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct FittedConstant {
    double value = 0;
    std::string fit_range; // e.g. "N in [243, 59049]"
};

struct ExperimentReport {
    std::string name;
    std::vector<std::array<double, 3>> series; // (N, value, error_bar)
    std::map<std::string, FittedConstant> fitted;
    std::map<std::string, bool> flags;
    std::map<std::string, std::string> metadata; // config_hash, seed, version, ...

    bool all_flags_pass() const;
    std::string to_json_text() const;
    std::string to_csv_text() const; // header: N,value,error_bar
};

// FNV-1a over the canonical config string; hex digest recorded in reports.
std::string config_hash(const std::string& canonical);

} // namespace weakmix
