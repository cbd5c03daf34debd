#pragma once

#include <stdexcept>
#include <string>

namespace ugvq {

// Base of all toolkit errors. InputError means the caller handed us data
// that violates a documented precondition or schema (CLI exit code 2).
// NumericError means a solver failed to reach its tolerance (exit code 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class SelfComparison : public InputError {
public:
    explicit SelfComparison(const std::string& item)
        : InputError("self-comparison for item '" + item + "'") {}
};

class UnknownWinner : public InputError {
public:
    UnknownWinner(const std::string& winner, const std::string& a, const std::string& b)
        : InputError("winner '" + winner + "' matches neither '" + a + "' nor '" + b + "'") {}
};

class NeverCompared : public InputError {
public:
    NeverCompared(const std::string& a, const std::string& b)
        : InputError("items '" + a + "' and '" + b + "' were never compared") {}
};

class NoEdges : public InputError {
public:
    NoEdges() : InputError("comparison graph has no observed edges") {}
};

class ZeroFlow : public InputError {
public:
    ZeroFlow() : InputError("preference flow is identically zero; inconsistency ratios undefined") {}
};

class EmptyGraph : public InputError {
public:
    EmptyGraph() : InputError("adjacency matrix has zero total weight") {}
};

class SingularSystem : public NumericError {
public:
    explicit SingularSystem(const std::string& what) : NumericError(what) {}
};

class NonConvergence : public NumericError {
public:
    explicit NonConvergence(const std::string& what) : NumericError(what) {}
};

class MissingColumn : public InputError {
public:
    explicit MissingColumn(const std::string& column)
        : InputError("required column '" + column + "' is missing") {}
};

class NonNumericValue : public InputError {
public:
    NonNumericValue(const std::string& column, const std::string& value)
        : InputError("column '" + column + "' holds non-numeric or out-of-range value '" + value + "'") {}
};

class DuplicateItem : public InputError {
public:
    explicit DuplicateItem(const std::string& item)
        : InputError("duplicate item id '" + item + "'") {}
};

class LengthMismatch : public InputError {
public:
    LengthMismatch(std::size_t a, std::size_t b)
        : InputError("vector lengths differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class DegenerateInput : public InputError {
public:
    explicit DegenerateInput(const std::string& what) : InputError(what) {}
};

class EmptyData : public InputError {
public:
    explicit EmptyData(const std::string& what) : InputError(what) {}
};

class DimensionMismatch : public InputError {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : InputError("feature vector has " + std::to_string(got) + " entries, model expects " +
                     std::to_string(expected)) {}
};

class ParseError : public InputError {
public:
    explicit ParseError(const std::string& what) : InputError(what) {}
};

} // namespace ugvq
