#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fvgrad/mesh.hpp"

namespace fvgrad {

enum class GridFamily { cartesian, perturbed, composite, elliptic };

GridFamily parse_grid_family(const std::string& name);
std::string to_string(GridFamily family);

/// How boundary vertices of a perturbed grid move. `free_boundary` displaces
/// every vertex; `straight_boundary` keeps boundary vertices on the square
/// (tangential displacement only, corners pinned) so Dirichlet geometry stays
/// exact for the diffusion tests.
enum class PerturbVariant { free_boundary, straight_boundary };

struct Box {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{1.0, 1.0};
};

struct GridSpec {
    GridFamily family = GridFamily::cartesian;
    int level = 0;        // refinement level r
    int base_n = 4;       // cells per side of the level-0 Cartesian grid
    std::uint64_t seed = 0;
    double amplitude = 0.25; // perturbation bound as a fraction of h
    PerturbVariant variant = PerturbVariant::free_boundary;
    Box domain;
};

/// Uniform base_n*2^r x base_n*2^r quad mesh on the domain.
Mesh gen_cartesian(const GridSpec& spec);

/// Random perturbation of the Cartesian grid one level finer (perturbed grid
/// r matches Cartesian grid r+1 in resolution). Every vertex, in row-major
/// order, draws a displacement pair from a SplitMix64 stream seeded with
/// spec.seed + spec.level, uniform in [-amplitude*h, amplitude*h) per
/// coordinate; amplitude 0.25 keeps all cells simple convex quadrilaterals,
/// which is asserted. The series seed offset makes each level an independent
/// perturbation.
Mesh gen_perturbed(const GridSpec& spec);

/// Two-level mesh on the unit square whose level-interface skeleton consists
/// of the segments (0,0.5)-(1,0.5), (0.5,0)-(0.5,1),
/// (0,0.25)-(0.25,0.25)-(0.25,0) and (0.75,1)-(0.75,0.75)-(1,0.75): the
/// lower-left and upper-right quadrants are coarse except for the fine
/// squares [0,0.25]^2 and [0.75,1]^2, the other two quadrants are fine. At
/// level r the coarse spacing is (1/8)/2^r; refinement subdivides every cell
/// into four, preserving the skeleton. Coarse cells at an interface carry the
/// hanging vertices, so their refined edges are split into two faces each.
Mesh gen_composite(const GridSpec& spec);

/// Dispatch to the family generator. For the elliptic family this solves the
/// grid equations from scratch; use EllipticGenerator to share the solve
/// across levels.
Mesh generate(const GridSpec& spec);

// --- elliptic (Laplace / TTM) grid generation ---------------------------------

/// Boundary point distributions of the mapped domain, parameterised over
/// [0,1] along each side.
struct EllipticBoundary {
    std::function<Vec2(double)> bottom, top, left, right;

    /// The wavy benchmark domain: the bottom boundary follows
    /// x = 0.5 + 0.5 sin(pi (xi - 0.5)), y = a sin(2 pi x) and the left
    /// boundary its transpose; top/right are shifted copies. Corners are
    /// exactly the unit-square corners. Amplitudes much beyond 0.1 fold the
    /// harmonic map (the domain stops being graph-like over the square), so
    /// 0.1 is the default.
    static EllipticBoundary sinusoidal(double amplitude = 0.1);

    /// x = xi, y = eta; the solver's fixed point is the uniform grid.
    static EllipticBoundary identity();
};

struct EllipticGridSpec {
    EllipticBoundary boundary = EllipticBoundary::sinusoidal();
    int solver_n = 513;        // nodes per side of the xi-eta solve (2^k + 1)
    double tolerance = 1e-12;  // Gauss-Seidel max-norm update threshold
    long max_iterations = 1000000;
};

/// Solves the inverted grid equations
///   g22 x_xixi - 2 g12 x_xieta + g11 x_etaeta = 0   (same for y)
/// with second-order central differences and point Gauss-Seidel sweeps until
/// the largest nodal update drops below the tolerance, then hands out
/// physical meshes sampled at computational spacings 0.25/2^r. Refinement
/// therefore happens in computational space.
class EllipticGenerator {
public:
    explicit EllipticGenerator(EllipticGridSpec spec);

    /// Level-r mesh with 4*2^r cells per side. Throws if the solver grid
    /// cannot be subsampled at that spacing.
    Mesh mesh(int level);

    long iterations() const { return iterations_; }

private:
    void solve();

    EllipticGridSpec spec_;
    bool solved_ = false;
    long iterations_ = 0;
    std::vector<double> x_, y_; // solver_n x solver_n nodal coordinates
};

Mesh gen_elliptic(const EllipticGridSpec& spec, int level);

} // namespace fvgrad
