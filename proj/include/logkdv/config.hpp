#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "logkdv/errors.hpp"

namespace logkdv {

// Flat key=value run configuration ('#' comments, UTF-8). Unknown keys are
// rejected by the command that consumes the config.
class RunConfig {
  public:
    RunConfig() = default;
    static RunConfig from_file(const std::string& path);
    static RunConfig from_text(std::string_view text);

    void set(std::string key, std::string value);
    bool has(std::string_view key) const;

    double get_real(std::string_view key, double fallback) const;
    int get_int(std::string_view key, int fallback) const;
    std::string get_str(std::string_view key, std::string fallback) const;

    // Throws ConfigError when a key outside `allowed` is present.
    void require_known(std::span<const std::string_view> allowed) const;

    // FNV-1a over the sorted canonical "key=value" lines.
    std::uint64_t hash() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace logkdv
