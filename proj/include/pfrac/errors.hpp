#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pfrac {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SearchExhausted : public Error {
public:
    using Error::Error;
};

/// Chaos-game orbit left the representable range (non-contractive system).
class Diverged : public Error {
public:
    using Error::Error;
};

/// All points collapsed onto one location; nothing to rasterize.
class DegenerateExtent : public Error {
public:
    using Error::Error;
};

class ResampleExhausted : public Error {
public:
    ResampleExhausted(std::size_t index, const std::string& what)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class GradMismatch : public Error {
public:
    GradMismatch(std::size_t parameter, const std::string& what)
        : Error(what), parameter_(parameter) {}
    std::size_t parameter() const noexcept { return parameter_; }

private:
    std::size_t parameter_;
};

class IoFailure : public Error {
public:
    IoFailure(std::string path, const std::string& what)
        : Error(what + ": " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class CorruptManifest : public Error {
public:
    using Error::Error;
};

class MissingImage : public Error {
public:
    explicit MissingImage(std::string file)
        : Error("missing image: " + file), file_(std::move(file)) {}
    const std::string& file() const noexcept { return file_; }

private:
    std::string file_;
};

class VersionMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace pfrac
