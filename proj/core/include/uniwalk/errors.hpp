#pragma once

#include <stdexcept>
#include <string>

namespace uniwalk {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (edge list, config, grid); message carries file and line.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally valid input that violates a parameter contract
/// (lambda without a matching bipartite, tau not summing to one, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Seed names that cannot be resolved to exactly one (multiplex, node).
class SeedError : public Error {
public:
    using Error::Error;
};

} // namespace uniwalk
