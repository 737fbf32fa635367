// report.cpp

#include "weakmix/report.hpp"

#include <cinttypes>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace weakmix {

bool ExperimentReport::all_flags_pass() const {
    for (const auto& [k, v] : flags)
        if (!v) return false;
    return true;
}

std::string ExperimentReport::to_json_text() const {
    nlohmann::json j;
    j["name"] = name;
    j["series"] = nlohmann::json::array();
    for (const auto& row : series)
        j["series"].push_back({{"N", row[0]}, {"value", row[1]}, {"error_bar", row[2]}});
    for (const auto& [k, v] : fitted)
        j["fitted_constants"][k] = {{"value", v.value}, {"fit_range", v.fit_range}};
    for (const auto& [k, v] : flags) j["flags"][k] = v;
    for (const auto& [k, v] : metadata) j["metadata"][k] = v;
    return j.dump(2);
}

std::string ExperimentReport::to_csv_text() const {
    std::string out = "N,value,error_bar\n";
    char buf[128];
    for (const auto& row : series) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", row[0], row[1], row[2]);
        out += buf;
    }
    return out;
}

std::string config_hash(const std::string& canonical) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

} // namespace weakmix
