#include "uniwalk/keyval.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "uniwalk/errors.hpp"

namespace uniwalk {

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Removes an unquoted trailing comment.
std::string_view strip_comment(std::string_view s) {
    bool in_quote = false;
    char quote = '\0';
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (in_quote) {
            if (c == quote) {
                in_quote = false;
            }
        } else if (c == '"' || c == '\'') {
            in_quote = true;
            quote = c;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

std::string unquote(std::string_view s, const std::string& where) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return std::string(s.substr(1, s.size() - 2));
    }
    if (!s.empty() && (s.front() == '"' || s.front() == '\'')) {
        throw ParseError(where + ": unterminated quote");
    }
    return std::string(s);
}

// Parses an inline value: scalar, [a, b] or [[a, b], [c, d]].
KeyValue::Value parse_inline(std::string_view text, const std::string& where);

KeyValue::List parse_inline_list(std::string_view text, const std::string& where) {
    KeyValue::List items;
    std::size_t depth = 0;
    std::size_t start = 0;
    bool any = false;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        const bool at_end = i == text.size();
        const char c = at_end ? ',' : text[i];
        if (!at_end && c == '[') {
            ++depth;
        } else if (!at_end && c == ']') {
            if (depth == 0) {
                throw ParseError(where + ": unbalanced ']'");
            }
            --depth;
        } else if (c == ',' && depth == 0) {
            const std::string_view piece = strip(text.substr(start, i - start));
            if (!piece.empty()) {
                items.push_back(parse_inline(piece, where));
                any = true;
            } else if (any || !at_end) {
                throw ParseError(where + ": empty list element");
            }
            start = i + 1;
        }
    }
    if (depth != 0) {
        throw ParseError(where + ": unbalanced '['");
    }
    return items;
}

KeyValue::Value parse_inline(std::string_view text, const std::string& where) {
    text = strip(text);
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') {
            throw ParseError(where + ": expected ']' at end of list");
        }
        return {parse_inline_list(text.substr(1, text.size() - 2), where)};
    }
    return {unquote(text, where)};
}

bool needs_quoting(const std::string& s) {
    if (s.empty()) {
        return true;
    }
    for (const char c : s) {
        if (c == '#' || c == '[' || c == ']' || c == ',' || c == ':' || c == '"' || c == '\'') {
            return true;
        }
    }
    return s.front() == ' ' || s.back() == ' ';
}

void write_value(std::ostream& out, const KeyValue::Value& v) {
    if (v.is_scalar()) {
        const std::string& s = v.scalar();
        if (needs_quoting(s)) {
            out << '"' << s << '"';
        } else {
            out << s;
        }
        return;
    }
    out << '[';
    const auto& list = v.list();
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i > 0) {
            out << ", ";
        }
        write_value(out, list[i]);
    }
    out << ']';
}

} // namespace

const std::string& KeyValue::Value::scalar() const {
    if (!is_scalar()) {
        throw ParseError("expected scalar value");
    }
    return std::get<std::string>(data);
}

const KeyValue::List& KeyValue::Value::list() const {
    if (!is_list()) {
        throw ParseError("expected list value");
    }
    return std::get<List>(data);
}

KeyValue KeyValue::parse(const std::string& text, const std::string& origin) {
    KeyValue doc;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::optional<std::size_t> open_block;  // index of entry collecting "- item" lines

    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = nl == std::string::npos
                                    ? std::string_view(text).substr(pos)
                                    : std::string_view(text).substr(pos, nl - pos);
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        line = strip_comment(line);

        const bool indented = !line.empty() && (line.front() == ' ' || line.front() == '\t');
        const std::string_view body = strip(line);
        if (!body.empty()) {
            if (indented && body.front() == '-') {
                if (!open_block) {
                    throw ParseError(where + ": list item without a key");
                }
                auto& value = doc.entries_[*open_block].second;
                if (value.is_scalar()) {
                    value.data = List{};
                }
                std::get<List>(value.data).push_back(parse_inline(body.substr(1), where));
            } else {
                const std::size_t colon = body.find(':');
                if (colon == std::string_view::npos) {
                    throw ParseError(where + ": expected 'key: value'");
                }
                const std::string key{strip(body.substr(0, colon))};
                if (key.empty()) {
                    throw ParseError(where + ": empty key");
                }
                if (doc.find(key)) {
                    throw ParseError(where + ": duplicate key '" + key + "'");
                }
                const std::string_view rest = strip(body.substr(colon + 1));
                if (rest.empty()) {
                    doc.entries_.emplace_back(key, Value{List{}});
                    open_block = doc.entries_.size() - 1;
                } else {
                    doc.entries_.emplace_back(key, parse_inline(rest, where));
                    open_block.reset();
                }
            }
        }
        if (nl == std::string::npos) {
            break;
        }
        pos = nl + 1;
    }
    return doc;
}

KeyValue KeyValue::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

const KeyValue::Value* KeyValue::find(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) {
            return &v;
        }
    }
    return nullptr;
}

bool KeyValue::has(const std::string& key) const { return find(key) != nullptr; }

const KeyValue::Value& KeyValue::get(const std::string& key) const {
    const Value* v = find(key);
    if (!v) {
        throw ParseError("missing key '" + key + "'");
    }
    return *v;
}

double KeyValue::to_double(const Value& v, const std::string& key) {
    const std::string& s = v.scalar();
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("key '" + key + "': expected a number, got '" + s + "'");
    }
    return value;
}

bool KeyValue::to_bool(const Value& v, const std::string& key) {
    const std::string& s = v.scalar();
    if (s == "true" || s == "yes" || s == "1") {
        return true;
    }
    if (s == "false" || s == "no" || s == "0") {
        return false;
    }
    throw ParseError("key '" + key + "': expected a boolean, got '" + s + "'");
}

std::string KeyValue::get_string(const std::string& key) const { return get(key).scalar(); }

double KeyValue::get_double(const std::string& key) const { return to_double(get(key), key); }

bool KeyValue::get_bool(const std::string& key) const { return to_bool(get(key), key); }

std::vector<std::string> KeyValue::get_string_list(const std::string& key) const {
    const Value& v = get(key);
    std::vector<std::string> out;
    if (v.is_scalar()) {  // single value accepted where a list is expected
        out.push_back(v.scalar());
        return out;
    }
    for (const Value& item : v.list()) {
        out.push_back(item.scalar());
    }
    return out;
}

std::vector<double> KeyValue::get_double_list(const std::string& key) const {
    const Value& v = get(key);
    std::vector<double> out;
    if (v.is_scalar()) {
        out.push_back(to_double(v, key));
        return out;
    }
    for (const Value& item : v.list()) {
        out.push_back(to_double(item, key));
    }
    return out;
}

std::vector<bool> KeyValue::get_bool_list(const std::string& key) const {
    const Value& v = get(key);
    std::vector<bool> out;
    if (v.is_scalar()) {
        out.push_back(to_bool(v, key));
        return out;
    }
    for (const Value& item : v.list()) {
        out.push_back(to_bool(item, key));
    }
    return out;
}

std::vector<std::vector<double>> KeyValue::get_matrix(const std::string& key,
                                                      std::size_t n) const {
    const Value& v = get(key);
    const List& list = v.list();
    std::vector<std::vector<double>> rows;
    if (!list.empty() && list.front().is_list()) {
        for (const Value& row : list) {
            std::vector<double> r;
            for (const Value& item : row.list()) {
                r.push_back(to_double(item, key));
            }
            rows.push_back(std::move(r));
        }
    } else {
        if (list.size() != n * n) {
            throw ParseError("key '" + key + "': expected " + std::to_string(n * n) +
                             " row-major values, got " + std::to_string(list.size()));
        }
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<double> row;
            for (std::size_t c = 0; c < n; ++c) {
                row.push_back(to_double(list[r * n + c], key));
            }
            rows.push_back(std::move(row));
        }
    }
    if (rows.size() != n) {
        throw ParseError("key '" + key + "': expected " + std::to_string(n) + " rows");
    }
    for (const auto& row : rows) {
        if (row.size() != n) {
            throw ParseError("key '" + key + "': expected " + std::to_string(n) +
                             " columns per row");
        }
    }
    return rows;
}

void KeyValue::set(const std::string& key, Value value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(key, std::move(value));
}

void KeyValue::set_scalar(const std::string& key, const std::string& value) {
    set(key, Value{value});
}

std::string KeyValue::to_text() const {
    std::ostringstream out;
    for (const auto& [key, value] : entries_) {
        out << key << ": ";
        write_value(out, value);
        out << '\n';
    }
    return out.str();
}

} // namespace uniwalk
