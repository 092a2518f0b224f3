#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "siegel/arith.hpp"

namespace siegel {

inline constexpr const char* kLibraryVersion = "0.1.0";

// plain key=value run configuration; '#' starts a comment
struct RunConfig {
    std::map<std::string, std::string> values;
    std::string source = "<string>";

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    i64 get_int(const std::string& key, i64 fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    // comma-separated integers
    std::vector<i64> get_ints(const std::string& key, const std::vector<i64>& fallback) const;
    void set(const std::string& key, const std::string& value) { values[key] = value; }
    // sorted "key=value" lines
    std::string canonical() const;
};

// throws std::invalid_argument on malformed lines, duplicate keys or keys outside allowed
RunConfig parse_config(const std::string& text, const std::set<std::string>& allowed,
                       const std::string& source = "<string>");
RunConfig load_config(const std::string& path, const std::set<std::string>& allowed);

std::uint64_t fnv1a64(const std::string& bytes);
// 16 hex digits of the FNV-1a hash of the canonical form
std::string config_hash(const RunConfig& cfg);

}  // namespace siegel
