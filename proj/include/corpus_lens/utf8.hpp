#ifndef CORPUS_LENS_UTF8_HPP
#define CORPUS_LENS_UTF8_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace corpus_lens::utf8 {

struct Decoded {
    char32_t cp;
    std::size_t bytes;
};

/// Decodes the code point starting at byte `pos`. Returns nullopt on
/// invalid sequences (bad lead byte, truncation, overlong forms,
/// surrogates, values above U+10FFFF).
inline std::optional<Decoded> decode(std::string_view s, std::size_t pos) {
    if (pos >= s.size()) return std::nullopt;
    const auto b0 = static_cast<std::uint8_t>(s[pos]);
    if (b0 < 0x80) return Decoded{b0, 1};

    std::size_t len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    else return std::nullopt;

    if (pos + len > s.size()) return std::nullopt;
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<std::uint8_t>(s[pos + i]);
        if ((b & 0xC0) != 0x80) return std::nullopt;
        cp = (cp << 6) | (b & 0x3F);
    }
    // overlong encodings
    if (len == 2 && cp < 0x80) return std::nullopt;
    if (len == 3 && cp < 0x800) return std::nullopt;
    if (len == 4 && cp < 0x10000) return std::nullopt;
    // surrogate halves and out-of-range values
    if (cp >= 0xD800 && cp <= 0xDFFF) return std::nullopt;
    if (cp > 0x10FFFF) return std::nullopt;
    return Decoded{cp, len};
}

inline bool validate(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto d = decode(s, pos);
        if (!d) return false;
        pos += d->bytes;
    }
    return true;
}

/// Number of code points; input must be valid UTF-8.
inline std::size_t codepoint_count(std::string_view s) {
    std::size_t n = 0, pos = 0;
    while (pos < s.size()) {
        const auto d = decode(s, pos);
        if (!d) { ++pos; } else { pos += d->bytes; }
        ++n;
    }
    return n;
}

/// Byte length of the first `n` code points of `s` (all of `s` if shorter).
inline std::size_t prefix_bytes(std::string_view s, std::size_t n) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n && pos < s.size(); ++i) {
        const auto d = decode(s, pos);
        pos += d ? d->bytes : 1;
    }
    return pos;
}

inline bool is_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
           cp == U'\f' || cp == U'\v' || cp == 0x3000;  // ideographic space
}

/// True when the string is empty or consists of whitespace only
/// (ASCII whitespace plus U+3000).
inline bool is_blank(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto d = decode(s, pos);
        if (!d) return false;
        if (!is_space(d->cp)) return false;
        pos += d->bytes;
    }
    return true;
}

/// Strips leading/trailing whitespace (ASCII plus U+3000).
inline std::string_view trim(std::string_view s) {
    std::size_t begin = 0;
    while (begin < s.size()) {
        const auto d = decode(s, begin);
        if (!d || !is_space(d->cp)) break;
        begin += d->bytes;
    }
    std::size_t pos = begin, end = begin;
    while (pos < s.size()) {
        const auto d = decode(s, pos);
        const std::size_t adv = d ? d->bytes : 1;
        if (!d || !is_space(d->cp)) end = pos + adv;
        pos += adv;
    }
    return s.substr(begin, end - begin);
}

}  // namespace corpus_lens::utf8

#endif
