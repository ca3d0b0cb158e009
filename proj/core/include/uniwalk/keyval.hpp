#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace uniwalk {

/// A single structured key-value document (YAML-style syntax, restricted to
/// what the config and grid files need): flat `key: value` pairs where a
/// value is a scalar, an inline list `[a, b]`, a nested inline list
/// `[[a, b], [c, d]]`, or a block list of `- item` lines. `#` starts a
/// comment; key order is preserved.
class KeyValue {
public:
    struct Value;
    using List = std::vector<Value>;
    struct Value {
        std::variant<std::string, List> data;

        bool is_scalar() const { return std::holds_alternative<std::string>(data); }
        bool is_list() const { return std::holds_alternative<List>(data); }
        const std::string& scalar() const;
        const List& list() const;
    };

    static KeyValue parse(const std::string& text, const std::string& origin = "<memory>");
    static KeyValue parse_file(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    const Value& get(const std::string& key) const;  // throws ParseError when absent

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<bool> get_bool_list(const std::string& key) const;
    /// Accepts either a nested list of n rows or a flat row-major list of n*n
    /// values.
    std::vector<std::vector<double>> get_matrix(const std::string& key, std::size_t n) const;

    const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }

    void set(const std::string& key, Value value);
    void set_scalar(const std::string& key, const std::string& value);

    /// Canonical text form, parseable by parse().
    std::string to_text() const;

    static double to_double(const Value& v, const std::string& key);
    static bool to_bool(const Value& v, const std::string& key);

private:
    std::vector<std::pair<std::string, Value>> entries_;

    const Value* find(const std::string& key) const;
};

} // namespace uniwalk
