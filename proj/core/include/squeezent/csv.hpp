#ifndef SQUEEZENT_CSV_HPP
#define SQUEEZENT_CSV_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace squeezent::csv {

/// Round-trip-exact double formatting: 17 significant digits, '.' decimal
/// separator regardless of locale.
std::string format_double(double v);
std::string format_size(std::size_t v);
std::string format_int(long long v);

/// Minimal deterministic CSV assembly: fixed header, '\n' line endings.
class Table {
public:
    explicit Table(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string to_string() const;

    /// Writes to the path, or to stdout when path is empty.
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace squeezent::csv

#endif
