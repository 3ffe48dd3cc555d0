#pragma once

#include <stdexcept>
#include <string>

namespace tokpack {

/// Malformed input file (dictionary, template, cost table, ...).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A meta label in the compressed text has no dictionary entry and lies in
/// the index range this dictionary is responsible for.
class UnresolvedLabelError : public std::runtime_error {
public:
    explicit UnresolvedLabelError(std::string label)
        : std::runtime_error("unresolved meta label: " + label), label_(std::move(label)) {}

    const std::string& label() const { return label_; }

private:
    std::string label_;
};

/// Template decoding failed (slot-count mismatch, unknown template id).
class ReconstructionError : public std::runtime_error {
public:
    explicit ReconstructionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tokpack
