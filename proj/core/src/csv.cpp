#include "squeezent/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace squeezent::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_size(std::size_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%zu", v);
    return buf;
}

std::string format_int(long long v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", v);
    return buf;
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("csv::Table: row width differs from header");
    rows_.push_back(std::move(cells));
}

std::string Table::to_string() const {
    std::string out;
    auto append_line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out.push_back(',');
            out += cells[i];
        }
        out.push_back('\n');
    };
    append_line(header_);
    for (const auto& row : rows_) append_line(row);
    return out;
}

void Table::write(const std::string& path) const {
    const std::string body = to_string();
    if (path.empty()) {
        std::fwrite(body.data(), 1, body.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("csv::Table: cannot open " + path);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
}

}  // namespace squeezent::csv
