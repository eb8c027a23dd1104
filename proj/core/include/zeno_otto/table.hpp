#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zeno_otto {

// Shortest round-trip decimal formatting ('.' separator); NaN -> empty string.
std::string format_double(double v);

// Column-typed numeric table with RFC-4180-style CSV output ('\n' line ends,
// '.' decimal, full double precision via shortest round-trip formatting).
class Table {
public:
    enum class ColumnKind { Real, Integer };

    explicit Table(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void add_column(std::string header, ColumnKind kind = ColumnKind::Real);
    void add_row(std::vector<double> cells);

    std::size_t row_count() const { return rows_.size(); }
    std::size_t column_count() const { return headers_.size(); }
    double cell(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    const std::vector<std::string>& headers() const { return headers_; }

    void write_csv(std::ostream& os) const;
    std::string to_csv() const;

private:
    std::string name_;
    std::vector<std::string> headers_;
    std::vector<ColumnKind> kinds_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace zeno_otto
