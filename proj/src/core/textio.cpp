#include "core/textio.hpp"

#include <charconv>

#include "core/errors.hpp"

namespace dephase::textio {

std::string format_double(double value) {
    if (value == 0.0) value = 0.0;  // canonicalize -0
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    if (columns_ == 0) {
        throw Error(ErrorCode::invalid_argument, "CSV needs at least one column");
    }
    add_row(header);
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) {
        throw Error(ErrorCode::invalid_argument, "CSV row width mismatch");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) text_.push_back(',');
        text_ += cells[i];
    }
    text_ += "\r\n";
}

}  // namespace dephase::textio
