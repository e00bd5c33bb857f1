#pragma once

#include <stdexcept>
#include <string>

namespace medf {

// Malformed or self-inconsistent input (bad JSON shape, length mismatch,
// node not in tree, ...). CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A declared properness modulus failed to deliver: no candidate node within
// the modulus-derived bound had a long enough output.
struct ModulusError : std::runtime_error {
    explicit ModulusError(const std::string& what) : std::runtime_error(what) {}
};

// The bounded search in the product catching construction ran out of budget.
// Usually means the eventual-difference hypothesis fails for the supplied
// inputs. CLI maps this to exit code 3.
struct SearchCapExhausted : std::runtime_error {
    SearchCapExhausted(const std::string& what, std::string tuple, unsigned depth)
        : std::runtime_error(what), tuple_desc(std::move(tuple)), depth_reached(depth) {}
    std::string tuple_desc;
    unsigned depth_reached;
};

// A supplied disagreement certificate is contradicted by direct evaluation.
struct CertificateError : std::runtime_error {
    explicit CertificateError(const std::string& what) : std::runtime_error(what) {}
};

// A block threshold fails to dominate the required minimum for its block.
struct DominationError : std::runtime_error {
    explicit DominationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace medf
