// csv.hpp: minimal deterministic CSV writing and reading.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace aww::csv {

/// Shortest round-trip decimal representation; identical input gives
/// identical text.
std::string format(double value);

class Writer {
public:
    /// Creates parent directories. Throws aww::Error if the file cannot be opened.
    Writer(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    /// Row whose leading cells are text.
    void row(const std::vector<std::string>& text, const std::vector<double>& values);

private:
    std::ofstream out_;
    std::size_t columns_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(const std::string& name) const;
};

/// Plain comma split, no quoting. Throws aww::Error on unreadable files.
Table read(const std::filesystem::path& path);

}  // namespace aww::csv
