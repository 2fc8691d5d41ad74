#pragma once

#include <stdexcept>
#include <string>

namespace confdfs {

/// The degree law has size-biased mean <= 1: no giant component, the
/// supercritical machinery (rho, xi, alpha_c, profiles) is undefined.
struct SubcriticalError : std::runtime_error {
    explicit SubcriticalError(const std::string& what) : std::runtime_error(what) {}
};

/// A fluid-limit state reached criticality during integration.
struct SubcriticalStateError : std::runtime_error {
    explicit SubcriticalStateError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A root solve failed to bracket; signals a numerics bug, not bad input.
struct NoRootError : std::runtime_error {
    explicit NoRootError(const std::string& what) : std::runtime_error(what) {}
};

/// An ODE step left the invariant region even after repeated halving.
struct StepSizeError : std::runtime_error {
    explicit StepSizeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace confdfs
