#pragma once

#include <stdexcept>
#include <string>

namespace cpa {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad parameter or malformed configuration (CLI exit code 2).
struct ValidationError : Error {
    using Error::Error;
};

// Malformed network graph: cycle, dangling edge, invalid cut.
struct StructureError : Error {
    using Error::Error;
};

// Physically meaningful but unsatisfiable request: divergent required
// correlation, impossible post-selection, no on-shell solution,
// insufficient background intensity (CLI exit code 3).
struct PhysicsError : Error {
    using Error::Error;
};

struct NoSolutionError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct DivergenceError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct PostSelectionError : PhysicsError {
    using PhysicsError::PhysicsError;
};

struct InsufficientBackgroundError : PhysicsError {
    using PhysicsError::PhysicsError;
};

// File / stream problems in the CLI (exit code 4).
struct IoError : Error {
    using Error::Error;
};

}  // namespace cpa
