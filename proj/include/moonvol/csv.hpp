#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moonvol::csv {

/// Reads RFC-4180 records one at a time. Quoted fields may contain commas,
/// doubled quotes and line breaks; CRLF and LF line endings are both accepted.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of stream. Blank lines are skipped.
    std::optional<std::vector<std::string>> next();

    /// Line on which the most recently returned record started (1-based).
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
};

/// Checks that `header` equals `expected` (after trimming a UTF-8 BOM); throws ParseError otherwise.
void expect_header(const std::vector<std::string>& header, const std::vector<std::string_view>& expected);

/// Strict decimal parse of the whole field; throws ParseError naming `what` and `line`.
double parse_double(std::string_view field, std::string_view what, std::size_t line);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

}  // namespace moonvol::csv
