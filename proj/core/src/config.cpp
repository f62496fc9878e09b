#include "aww/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aww/errors.hpp"

namespace aww {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_number(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + t + "' is not a number");
    }
}

std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (trim(cell).empty()) continue;
        out.push_back(parse_number(cell, key));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(number) + ": empty key");
        cfg.values_[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

bool Config::has(const std::string& key) const {
    return values_.count(key) != 0;
}

std::optional<std::string> Config::find(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

const std::string& Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "' in " + origin_);
    return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    return find(key).value_or(fallback);
}

double Config::get_double(const std::string& key) const {
    return parse_number(get(key), key);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto v = find(key);
    return v ? parse_number(*v, key) : fallback;
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    const double x = parse_number(*v, key);
    if (x < 0 || x != std::floor(x)) throw ConfigError("key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(x);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("key '" + key + "' must be true or false");
}

std::vector<double> Config::get_list(const std::string& key) const {
    return parse_number_list(get(key), key);
}

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

}  // namespace aww
