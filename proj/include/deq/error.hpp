#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace deq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// One or more faces have zero (or negative, for planar maps) area.
class DegenerateFaceError : public Error {
public:
    DegenerateFaceError(const std::string& what, std::vector<int> faces)
        : Error(what), faces_(std::move(faces))
    {
    }
    const std::vector<int>& faces() const noexcept { return faces_; }

private:
    std::vector<int> faces_;
};

class TopologyError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DensityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace deq
