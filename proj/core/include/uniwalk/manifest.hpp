#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "uniwalk/keyval.hpp"

namespace uniwalk {

/// FNV-1a 64-bit content fingerprint (manifest provenance, not cryptography).
std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string digest_hex(std::uint64_t digest);

/// Accumulates the reproducibility manifest of one CLI run: tool version,
/// subcommand, rng seed, effective parameters, input digests, run stats.
/// Contains no timestamps or absolute output paths, so identical runs write
/// identical manifests.
class Manifest {
public:
    Manifest(std::string_view subcommand);

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::size_t value);
    void set_input(const std::string& name, const std::filesystem::path& path);
    void merge(const KeyValue& doc, const std::string& prefix);

    void write(const std::filesystem::path& path) const;
    const KeyValue& doc() const { return doc_; }

private:
    KeyValue doc_;
};

} // namespace uniwalk
