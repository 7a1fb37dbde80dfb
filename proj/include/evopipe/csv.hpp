#pragma once

#include <charconv>
#include <string>

namespace evopipe {

// Shortest round-trip formatting; stable bytes for reproducible outputs.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// RFC-4180 style quoting for cells that may carry commas or quotes.
inline std::string csv_quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace evopipe
