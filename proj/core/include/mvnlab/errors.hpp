#pragma once

#include <stdexcept>
#include <string>

namespace mvnlab {

// Root of the library's error hierarchy.  Every failure carries the name of
// the subsystem that raised it so the CLI can emit "ERROR: <module>: <msg>"
// lines without guessing.
class Error : public std::runtime_error {
public:
    Error(std::string kind, std::string module, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)), module_(std::move(module)) {}

    const std::string& kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    std::string kind_;
    std::string module_;
};

#define MVNLAB_DEFINE_ERROR(NAME, MODULE)                                          \
    class NAME : public Error {                                                    \
    public:                                                                        \
        explicit NAME(const std::string& message) : Error(#NAME, MODULE, message) {} \
    }

MVNLAB_DEFINE_ERROR(NotHermitian, "linops");
MVNLAB_DEFINE_ERROR(NotUnitary, "linops");
MVNLAB_DEFINE_ERROR(SpectralObstruction, "linops");
MVNLAB_DEFINE_ERROR(DimensionMismatch, "linops");

MVNLAB_DEFINE_ERROR(BadWeights, "blockvn");
MVNLAB_DEFINE_ERROR(AlgebraMismatch, "blockvn");
MVNLAB_DEFINE_ERROR(GrammarOverflow, "blockvn");
MVNLAB_DEFINE_ERROR(Unbounded, "blockvn");
MVNLAB_DEFINE_ERROR(DivergentTail, "blockvn");
MVNLAB_DEFINE_ERROR(TailConflict, "blockvn");

MVNLAB_DEFINE_ERROR(PreconditionFailed, "liealg");
MVNLAB_DEFINE_ERROR(BadMorphism, "tensorcat");

MVNLAB_DEFINE_ERROR(ConfigError, "cli");

#undef MVNLAB_DEFINE_ERROR

// Text-format failure; remembers where in the input it happened.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column = 0)
        : Error("ParseError", "cli",
                message + " (line " + std::to_string(line) + ", col " + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace mvnlab
