#pragma once

#include <stdexcept>
#include <string>

namespace fvgrad {

/// Thrown for topological or geometric defects of a mesh (non-manifold edge,
/// degenerate polygon, unassigned boundary face, ...).
class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a numerical procedure cannot deliver a result: rank-deficient
/// least-squares stencil, iterative solver that fails to converge, etc.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fvgrad
