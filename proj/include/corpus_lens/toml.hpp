#ifndef CORPUS_LENS_TOML_HPP
#define CORPUS_LENS_TOML_HPP

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "corpus_lens/corpus.hpp" // detail::read_file_utf8, detail::split_lines
#include "corpus_lens/errors.hpp"

namespace corpus_lens::toml {

/// Minimal TOML reader covering what run configs need: [section] tables,
/// bare keys, basic strings, integers, floats, booleans, and single-line
/// arrays of scalars. Dotted keys, multi-line values, and dates are not
/// supported and raise ConfigError.
struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<std::string, std::int64_t, double, bool, Array> data;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_float() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }

    const std::string& as_string() const {
        if (!is_string()) throw ConfigError("TOML value is not a string");
        return std::get<std::string>(data);
    }
    std::int64_t as_int() const {
        if (!is_int()) throw ConfigError("TOML value is not an integer");
        return std::get<std::int64_t>(data);
    }
    double as_float() const {
        if (is_int()) return static_cast<double>(std::get<std::int64_t>(data));
        if (!is_float()) throw ConfigError("TOML value is not a float");
        return std::get<double>(data);
    }
    bool as_bool() const {
        if (!is_bool()) throw ConfigError("TOML value is not a boolean");
        return std::get<bool>(data);
    }
    const Array& as_array() const {
        if (!is_array()) throw ConfigError("TOML value is not an array");
        return std::get<Array>(data);
    }
};

class Table {
public:
    bool contains(const std::string& key) const { return values_.count(key) > 0; }

    const Value* find(const std::string& key) const {
        const auto it = values_.find(key);
        return it == values_.end() ? nullptr : &it->second;
    }

    std::optional<std::string> get_string(const std::string& key) const {
        const auto* v = find(key);
        if (!v) return std::nullopt;
        return v->as_string();
    }
    std::optional<std::int64_t> get_int(const std::string& key) const {
        const auto* v = find(key);
        if (!v) return std::nullopt;
        return v->as_int();
    }
    std::optional<double> get_float(const std::string& key) const {
        const auto* v = find(key);
        if (!v) return std::nullopt;
        return v->as_float();
    }
    std::optional<bool> get_bool(const std::string& key) const {
        const auto* v = find(key);
        if (!v) return std::nullopt;
        return v->as_bool();
    }
    std::optional<std::vector<std::string>> get_string_array(const std::string& key) const {
        const auto* v = find(key);
        if (!v) return std::nullopt;
        std::vector<std::string> out;
        for (const auto& item : v->as_array()) out.push_back(item.as_string());
        return out;
    }

    const std::map<std::string, Value>& values() const { return values_; }

    static Table parse(std::string_view text);
    static Table parse_file(const std::filesystem::path& path) {
        return parse(corpus_lens::detail::read_file_utf8(path));
    }

private:
    std::map<std::string, Value> values_; // flattened "section.key"
};

namespace detail {

inline bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;
    std::size_t lineno;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("TOML line " + std::to_string(lineno) + ": " + msg);
    }
    bool eof() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    void skip_ws() {
        while (!eof() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
};

inline std::string parse_basic_string(Cursor& c) {
    // cursor sits on the opening quote
    ++c.pos;
    std::string out;
    while (!c.eof() && c.peek() != '"') {
        char ch = c.peek();
        if (ch == '\\') {
            ++c.pos;
            if (c.eof()) c.fail("dangling escape");
            switch (c.peek()) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                default: c.fail(std::string("unsupported escape \\") + c.peek());
            }
            ++c.pos;
        } else {
            out.push_back(ch);
            ++c.pos;
        }
    }
    if (c.eof()) c.fail("unterminated string");
    ++c.pos; // closing quote
    return out;
}

inline Value parse_scalar(Cursor& c);

inline Value parse_value(Cursor& c) {
    c.skip_ws();
    if (c.eof()) c.fail("missing value");
    if (c.peek() == '[') {
        ++c.pos;
        Array arr;
        for (;;) {
            c.skip_ws();
            if (c.eof()) c.fail("unterminated array");
            if (c.peek() == ']') {
                ++c.pos;
                break;
            }
            arr.push_back(parse_value(c));
            c.skip_ws();
            if (!c.eof() && c.peek() == ',') {
                ++c.pos;
                continue;
            }
            if (!c.eof() && c.peek() == ']') {
                ++c.pos;
                break;
            }
            c.fail("expected ',' or ']' in array");
        }
        return Value{std::move(arr)};
    }
    return parse_scalar(c);
}

inline Value parse_scalar(Cursor& c) {
    if (c.peek() == '"') return Value{parse_basic_string(c)};
    const std::size_t start = c.pos;
    while (!c.eof() && c.peek() != ',' && c.peek() != ']' && c.peek() != '#' && c.peek() != ' ' &&
           c.peek() != '\t')
        ++c.pos;
    std::string tok(c.s.substr(start, c.pos - start));
    if (tok.empty()) c.fail("missing value");
    if (tok == "true") return Value{true};
    if (tok == "false") return Value{false};

    const bool looks_float = tok.find_first_of(".eE") != std::string::npos &&
                             tok.find_first_not_of("+-0123456789.eE") == std::string::npos;
    try {
        std::size_t used = 0;
        if (looks_float) {
            const double d = std::stod(tok, &used);
            if (used == tok.size()) return Value{d};
        } else {
            const long long i = std::stoll(tok, &used);
            if (used == tok.size()) return Value{static_cast<std::int64_t>(i)};
        }
    } catch (const std::exception&) {
        // fall through to the failure below
    }
    c.fail("cannot parse value: " + tok);
}

}  // namespace detail

inline Table Table::parse(std::string_view text) {
    Table table;
    std::string section;
    std::size_t lineno = 0;
    for (const auto& raw_line : corpus_lens::detail::split_lines(text)) {
        ++lineno;
        detail::Cursor c{raw_line, 0, lineno};
        c.skip_ws();
        if (c.eof() || c.peek() == '#') continue;

        if (c.peek() == '[') {
            const auto close = raw_line.find(']', c.pos);
            if (close == std::string::npos) c.fail("unterminated section header");
            section = std::string(corpus_lens::utf8::trim(raw_line.substr(c.pos + 1, close - c.pos - 1)));
            if (section.empty()) c.fail("empty section name");
            continue;
        }

        const std::size_t key_start = c.pos;
        while (!c.eof() && detail::is_bare_key_char(c.peek())) ++c.pos;
        const std::string key(raw_line.substr(key_start, c.pos - key_start));
        if (key.empty()) c.fail("expected key");
        c.skip_ws();
        if (c.eof() || c.peek() != '=') c.fail("expected '=' after key " + key);
        ++c.pos;
        auto value = detail::parse_value(c);
        c.skip_ws();
        if (!c.eof() && c.peek() != '#') c.fail("trailing characters after value for key " + key);

        const std::string full = section.empty() ? key : section + "." + key;
        if (table.values_.count(full)) c.fail("duplicate key " + full);
        table.values_.emplace(full, std::move(value));
    }
    return table;
}

}  // namespace corpus_lens::toml

#endif
