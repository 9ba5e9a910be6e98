#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace mric {

// `key = value` lines; '#' starts a comment; blank lines ignored.
// Duplicate keys are an error.
std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path);

std::map<std::string, std::string> parse_config_text(const std::string& text);

// Typed lookups. `require_*` throws ValidationError naming the key when it
// is absent; `get_*` returns the fallback.
int64_t require_int(const std::map<std::string, std::string>& cfg,
                    const std::string& key);
int64_t get_int(const std::map<std::string, std::string>& cfg,
                const std::string& key, int64_t fallback);
double get_double(const std::map<std::string, std::string>& cfg,
                  const std::string& key, double fallback);
std::string require_string(const std::map<std::string, std::string>& cfg,
                           const std::string& key);
std::string get_string(const std::map<std::string, std::string>& cfg,
                       const std::string& key, const std::string& fallback);

} // namespace mric
