#include "mric/config.hpp"

#include <fstream>
#include <sstream>

#include "mric/errors.hpp"

namespace mric {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": empty key");
        }
        if (!cfg.emplace(key, value).second) {
            throw ValidationError("duplicate config key: " + key);
        }
    }
    return cfg;
}

std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

int64_t require_int(const std::map<std::string, std::string>& cfg,
                    const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) {
        throw ValidationError("missing mandatory config key: " + key);
    }
    try {
        std::size_t pos = 0;
        const int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key " + key + " is not an integer: " +
                              it->second);
    }
}

int64_t get_int(const std::map<std::string, std::string>& cfg,
                const std::string& key, int64_t fallback) {
    return cfg.count(key) ? require_int(cfg, key) : fallback;
}

double get_double(const std::map<std::string, std::string>& cfg,
                  const std::string& key, double fallback) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key " + key + " is not a number: " +
                              it->second);
    }
}

std::string require_string(const std::map<std::string, std::string>& cfg,
                           const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) {
        throw ValidationError("missing mandatory config key: " + key);
    }
    return it->second;
}

std::string get_string(const std::map<std::string, std::string>& cfg,
                       const std::string& key, const std::string& fallback) {
    auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

} // namespace mric
