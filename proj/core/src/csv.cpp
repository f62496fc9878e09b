#include "aww/csv.hpp"

#include <charconv>
#include <sstream>

#include "aww/errors.hpp"

namespace aww::csv {

std::string format(double value) {
    char buffer[64];
    const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, res.ptr);
}

Writer::Writer(const std::filesystem::path& path, const std::vector<std::string>& header)
    : columns_(header.size()) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path);
    if (!out_) throw Error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void Writer::row(const std::vector<double>& values) {
    row({}, values);
}

void Writer::row(const std::vector<std::string>& text, const std::vector<double>& values) {
    if (text.size() + values.size() != columns_) throw Error("csv row width does not match header");
    bool first = true;
    for (const auto& t : text) {
        out_ << (first ? "" : ",") << t;
        first = false;
    }
    for (double v : values) {
        out_ << (first ? "" : ",") << format(v);
        first = false;
    }
    out_ << '\n';
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw Error("csv column '" + name + "' not found");
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    Table table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

}  // namespace aww::csv
