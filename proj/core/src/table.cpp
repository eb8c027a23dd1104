#include "zeno_otto/table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zeno_otto {

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void Table::add_column(std::string header, ColumnKind kind) {
    if (!rows_.empty()) throw std::logic_error("Table: add columns before rows");
    headers_.push_back(std::move(header));
    kinds_.push_back(kind);
}

void Table::add_row(std::vector<double> cells) {
    if (cells.size() != headers_.size()) {
        throw std::logic_error("Table '" + name_ + "': row width " + std::to_string(cells.size()) +
                               " != column count " + std::to_string(headers_.size()));
    }
    rows_.push_back(std::move(cells));
}

void Table::write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < headers_.size(); ++c) {
        if (c) os << ',';
        os << headers_[c];
    }
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            if (kinds_[c] == ColumnKind::Integer && !std::isnan(row[c])) {
                os << static_cast<long long>(std::llround(row[c]));
            } else {
                os << format_double(row[c]);
            }
        }
        os << '\n';
    }
}

std::string Table::to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

}  // namespace zeno_otto
