#include "siegel/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace siegel {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const RunConfig& c, const std::string& key, const std::string& what) {
    throw std::invalid_argument(c.source + ": key '" + key + "' = '" + c.values.at(key) + "' is not " + what);
}

template <class T, class F>
T convert(const RunConfig& c, const std::string& key, T fallback, F parse, const char* what) {
    auto it = c.values.find(key);
    if (it == c.values.end()) return fallback;
    std::size_t used = 0;
    T v{};
    try {
        v = parse(it->second, &used);
    } catch (const std::exception&) {
        bad_value(c, key, what);
    }
    if (used != it->second.size()) bad_value(c, key, what);
    return v;
}

}  // namespace

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

i64 RunConfig::get_int(const std::string& key, i64 fallback) const {
    return convert<i64>(*this, key, fallback, [](const std::string& s, std::size_t* n) { return std::stol(s, n); },
                        "an integer");
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    return convert<double>(*this, key, fallback, [](const std::string& s, std::size_t* n) { return std::stod(s, n); },
                           "a number");
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    return convert<std::uint64_t>(
        *this, key, fallback,
        [](const std::string& s, std::size_t* n) -> std::uint64_t {
            if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
            return std::stoull(s, n);
        },
        "an unsigned integer");
}

std::vector<i64> RunConfig::get_ints(const std::string& key, const std::vector<i64>& fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::vector<i64> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        std::size_t used = 0;
        i64 v = 0;
        try {
            v = std::stol(item, &used);
        } catch (const std::exception&) {
            bad_value(*this, key, "a comma-separated integer list");
        }
        if (used != item.size()) bad_value(*this, key, "a comma-separated integer list");
        out.push_back(v);
    }
    return out;
}

std::string RunConfig::canonical() const {
    std::string s;
    for (const auto& [k, v] : values) s += k + "=" + v + "\n";
    return s;
}

RunConfig parse_config(const std::string& text, const std::set<std::string>& allowed, const std::string& source) {
    RunConfig c;
    c.source = source;
    std::stringstream ss(text);
    std::string line;
    int no = 0;
    while (std::getline(ss, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::string where = source + ":" + std::to_string(no);
        if (eq == std::string::npos) throw std::invalid_argument(where + ": expected key=value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument(where + ": empty key");
        if (!allowed.count(key)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw std::invalid_argument(where + ": unknown key '" + key + "' (accepted: " + list + ")");
        }
        if (!c.values.emplace(key, value).second) throw std::invalid_argument(where + ": duplicate key '" + key + "'");
    }
    return c;
}

RunConfig load_config(const std::string& path, const std::set<std::string>& allowed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), allowed, path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash(const RunConfig& cfg) { return fmt::format("{:016x}", fnv1a64(cfg.canonical())); }

}  // namespace siegel
