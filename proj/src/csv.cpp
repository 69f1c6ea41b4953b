#include "moonvol/csv.hpp"

#include "moonvol/error.hpp"

#include <charconv>
#include <cmath>

namespace moonvol::csv {

std::optional<std::vector<std::string>> Reader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        record_line_ = line_;
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        bool was_quoted = false;
        std::size_t i = 0;
        for (;;) {
            if (i == line.size()) {
                if (!quoted) break;
                // Quoted field spans a line break.
                std::string more;
                if (!std::getline(in_, more)) throw ParseError("unterminated quoted field", record_line_);
                ++line_;
                if (!more.empty() && more.back() == '\r') more.pop_back();
                field += '\n';
                line = std::move(more);
                i = 0;
                continue;
            }
            const char c = line[i++];
            if (quoted) {
                if (c == '"') {
                    if (i < line.size() && line[i] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    field += c;
                }
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                was_quoted = false;
            } else if (c == '"' && field.empty() && !was_quoted) {
                quoted = was_quoted = true;
            } else if (c == '"') {
                throw ParseError("stray quote in field", record_line_);
            } else {
                field += c;
            }
        }
        fields.push_back(std::move(field));
        return fields;
    }
    return std::nullopt;
}

void expect_header(const std::vector<std::string>& header, const std::vector<std::string_view>& expected) {
    std::vector<std::string> got = header;
    if (!got.empty() && got[0].rfind("\xEF\xBB\xBF", 0) == 0) got[0].erase(0, 3);
    bool ok = got.size() == expected.size();
    for (std::size_t i = 0; ok && i < got.size(); ++i) ok = got[i] == expected[i];
    if (!ok) {
        std::string want;
        for (auto e : expected) want += (want.empty() ? "" : ",") + std::string(e);
        throw ParseError("bad header, expected '" + want + "'", 1);
    }
}

double parse_double(std::string_view field, std::string_view what, std::size_t line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last || !std::isfinite(value))
        throw ParseError("malformed " + std::string(what) + " '" + std::string(field) + "'", line);
    return value;
}

std::string format_double(double value) {
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace moonvol::csv
