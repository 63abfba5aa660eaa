#ifndef DEPHASE_CORE_TEXTIO_HPP
#define DEPHASE_CORE_TEXTIO_HPP

#include <string>
#include <vector>

#include "core/types.hpp"

namespace dephase::textio {

// Shortest round-trip decimal representation (<= 17 significant digits).
std::string format_double(double value);

// RFC 4180 CSV: header + rows, CRLF line endings, no quoting needed for
// numeric/label cells.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    const std::string& text() const noexcept { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

}  // namespace dephase::textio

#endif
