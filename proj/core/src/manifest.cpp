#include "uniwalk/manifest.hpp"

#include <fstream>
#include <sstream>

#include "uniwalk/edge_list.hpp"
#include "uniwalk/errors.hpp"
#include "uniwalk/version.hpp"

namespace uniwalk {

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string() + " for digest");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a(buf.str());
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

Manifest::Manifest(std::string_view subcommand) {
    doc_.set_scalar("version", kVersion);
    doc_.set_scalar("subcommand", std::string(subcommand));
}

void Manifest::set(const std::string& key, const std::string& value) {
    doc_.set_scalar(key, value);
}

void Manifest::set(const std::string& key, double value) {
    doc_.set_scalar(key, format_score(value));
}

void Manifest::set(const std::string& key, std::size_t value) {
    doc_.set_scalar(key, std::to_string(value));
}

void Manifest::set_input(const std::string& name, const std::filesystem::path& path) {
    doc_.set_scalar("input." + name + ".digest", digest_hex(fnv1a_file(path)));
}

void Manifest::merge(const KeyValue& doc, const std::string& prefix) {
    for (const auto& [key, value] : doc.entries()) {
        doc_.set(prefix + key, value);
    }
}

void Manifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write manifest " + path.string());
    }
    out << doc_.to_text();
}

} // namespace uniwalk
