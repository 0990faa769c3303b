#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lapstream {

/// Base of every error raised by the library. Data errors map to CLI exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SelfLoopError : public Error {
public:
    explicit SelfLoopError(std::uint64_t node)
        : Error("self-loop on node " + std::to_string(node)), node_(node) {}
    std::uint64_t node() const noexcept { return node_; }

private:
    std::uint64_t node_;
};

class MissingEdgeError : public Error {
public:
    MissingEdgeError(std::uint64_t u, std::uint64_t v)
        : Error("missing edge (" + std::to_string(u) + "," + std::to_string(v) + ")") {}
};

class DuplicateEdgeError : public Error {
public:
    DuplicateEdgeError(std::uint64_t u, std::uint64_t v)
        : Error("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")") {}
};

class UnknownNodeError : public Error {
public:
    explicit UnknownNodeError(std::uint64_t node) : Error("unknown node " + std::to_string(node)) {}
};

class ZeroEnergyError : public Error {
public:
    ZeroEnergyError() : Error("graph Laplacian energy is zero; cannot normalize") {}
};

class EmptyDatasetError : public Error {
public:
    EmptyDatasetError() : Error("dataset contains no edge events") {}
};

/// Positioned input error. `line` is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Wraps a failure that happened while processing step `step` of an evolving run.
class StepError : public Error {
public:
    StepError(std::size_t step, const std::string& what)
        : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace lapstream
