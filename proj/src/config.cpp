#include "logkdv/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace logkdv {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

RunConfig RunConfig::from_text(std::string_view text) {
    RunConfig cfg;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(std::string_view(stripped).substr(0, eq));
        std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.kv_[std::move(key)] = std::move(value);
    }
    return cfg;
}

void RunConfig::set(std::string key, std::string value) {
    kv_[std::move(key)] = std::move(value);
}

bool RunConfig::has(std::string_view key) const { return kv_.count(std::string(key)) > 0; }

double RunConfig::get_real(std::string_view key, double fallback) const {
    const auto it = kv_.find(std::string(key));
    if (it == kv_.end()) return fallback;
    char* endp = nullptr;
    const double v = std::strtod(it->second.c_str(), &endp);
    if (endp == it->second.c_str() || *endp != '\0')
        throw ConfigError("config key '" + std::string(key) + "': not a number: " + it->second);
    return v;
}

int RunConfig::get_int(std::string_view key, int fallback) const {
    const double v = get_real(key, fallback);
    const int iv = static_cast<int>(v);
    if (static_cast<double>(iv) != v)
        throw ConfigError("config key '" + std::string(key) + "': not an integer");
    return iv;
}

std::string RunConfig::get_str(std::string_view key, std::string fallback) const {
    const auto it = kv_.find(std::string(key));
    return it == kv_.end() ? fallback : it->second;
}

void RunConfig::require_known(std::span<const std::string_view> allowed) const {
    for (const auto& [key, value] : kv_) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown config key: " + key);
    }
}

std::uint64_t RunConfig::hash() const {
    // FNV-1a; the map iterates sorted, so the digest is canonical
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::string_view s) {
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
    };
    for (const auto& [key, value] : kv_) {
        mix(key);
        mix("=");
        mix(value);
        mix("\n");
    }
    return h;
}

}  // namespace logkdv
