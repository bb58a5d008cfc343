#ifndef CORPUS_LENS_FORMAT_HPP
#define CORPUS_LENS_FORMAT_HPP

#include <charconv>
#include <string>

namespace corpus_lens::detail {

/// Locale-independent double formatting, 6 significant digits. Used wherever
/// numbers reach byte-exact output (SVG, DOT/GraphML attributes, CSV).
inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

/// Full-precision variant (shortest round-trip form) for CSV values where
/// downstream consumers may re-parse the number.
inline std::string fmt_double_full(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace corpus_lens::detail

#endif
