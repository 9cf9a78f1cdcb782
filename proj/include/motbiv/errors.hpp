#pragma once

#include <stdexcept>
#include <string>

namespace motbiv {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct AmbientMismatch : Error {
    explicit AmbientMismatch(const std::string& w) : Error("AmbientMismatch: " + w) {}
};

struct NotDivisible : Error {
    explicit NotDivisible(const std::string& w) : Error("NotDivisible: " + w) {}
};

struct InvalidParameters : Error {
    explicit InvalidParameters(const std::string& w) : Error("InvalidParameters: " + w) {}
};

struct UnsupportedMorphism : Error {
    explicit UnsupportedMorphism(const std::string& w) : Error("UnsupportedMorphism: " + w) {}
};

struct UnsupportedFiberProduct : Error {
    explicit UnsupportedFiberProduct(const std::string& w) : Error("UnsupportedFiberProduct: " + w) {}
};

struct NotSmooth : Error {
    explicit NotSmooth(const std::string& w) : Error("NotSmooth: " + w) {}
};

struct NotProper : Error {
    explicit NotProper(const std::string& w) : Error("NotProper: " + w) {}
};

struct CompositeNotSmooth : Error {
    explicit CompositeNotSmooth(const std::string& w) : Error("CompositeNotSmooth: " + w) {}
};

struct ReferenceMismatch : Error {
    explicit ReferenceMismatch(const std::string& w) : Error("ReferenceMismatch: " + w) {}
};

struct ReferenceNotPoint : Error {
    explicit ReferenceNotPoint(const std::string& w) : Error("ReferenceNotPoint: " + w) {}
};

struct InvalidDiagram : Error {
    explicit InvalidDiagram(const std::string& w) : Error("InvalidDiagram: " + w) {}
};

struct InsufficientOrder : Error {
    explicit InsufficientOrder(const std::string& w) : Error("InsufficientOrder: " + w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error("ParseError: " + w) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& w) : Error("SchemaError: " + w) {}
};

} // namespace motbiv
