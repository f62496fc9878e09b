// config.hpp: flat `key = value` configuration files.
//
// One entry per line, `#` starts a comment, keys are dotted paths such as
// `bath.name` or `solver.rtol`. Later entries override earlier ones.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aww {

class Config {
public:
    Config() = default;

    /// Throws ConfigError on malformed lines; `origin` names the source in messages.
    static Config parse(const std::string& text, const std::string& origin = "<string>");
    static Config load(const std::filesystem::path& path);

    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] std::optional<std::string> find(const std::string& key) const;
    /// Throws ConfigError naming the key when absent.
    [[nodiscard]] const std::string& get(const std::string& key) const;
    [[nodiscard]] std::string get(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] std::size_t get_size(const std::string& key, std::size_t fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated numbers.
    [[nodiscard]] std::vector<double> get_list(const std::string& key) const;
    [[nodiscard]] std::vector<std::string> keys() const;
    [[nodiscard]] const std::string& origin() const noexcept { return origin_; }

    void set(const std::string& key, const std::string& value);

private:
    std::map<std::string, std::string> values_;
    std::string origin_{"<empty>"};
};

/// Parses one number, reporting `key` on failure.
double parse_number(const std::string& text, const std::string& key);
std::vector<double> parse_number_list(const std::string& text, const std::string& key);

}  // namespace aww
