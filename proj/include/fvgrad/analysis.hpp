#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fvgrad/fields.hpp"
#include "fvgrad/gradient.hpp"
#include "fvgrad/grid_gen.hpp"
#include "fvgrad/mesh.hpp"

namespace fvgrad {

/// Mean and maximum Euclidean gradient errors over the cells; the mean is
/// volume-weighted when requested.
std::pair<double, double> eps_norms(const GradientField& approx, const GradientField& exact,
                                    const Mesh& mesh, bool volume_weighted);

/// log2(e_coarse / e_fine) for a 2:1 refinement pair. Throws on non-positive
/// errors.
double observed_order(double e_coarse, double e_fine);
std::vector<double> observed_orders(const std::vector<double>& errors);

/// interface beats boundary beats interior, so the classes partition the
/// cells: interface = owns a face with a refinement level jump, boundary =
/// owns a boundary face.
enum class CellClass { interior, boundary, interface_cell };
std::vector<CellClass> classify_cells(const Mesh& mesh);
std::string to_string(CellClass c);

struct StudySpec {
    GridSpec grid;                       // family, base_n, seed, variant
    EllipticGridSpec elliptic;           // used by the elliptic family
    int level_begin = 0;
    int level_end = 4;                   // inclusive
    AnalyticField field = AnalyticField::tanh2d();
    std::vector<SchemeConfig> schemes;
};

struct StudyRow {
    std::string family;
    int level;
    double h; // nominal spacing, halves per level
    std::string scheme;
    std::string q;          // empty for Green-Gauss
    std::string correctors; // empty for least squares
    std::string norm;       // eps_mean | eps_mean_vol | eps_max
    std::string cell_class; // all | interior | boundary | interface
    double value;
    std::optional<double> order; // vs the previous level
};

struct StudyResult {
    std::vector<StudyRow> rows;

    /// The error series of one (scheme label, norm, class) combination in
    /// level order, and the matching observed orders.
    std::vector<double> series(const std::string& scheme, const std::string& norm,
                               const std::string& cell_class = "all") const;

    std::string csv() const;
    /// Gnuplot-friendly layout: one `# scheme=... norm=...` block of
    /// `level h value` rows per curve (class "all"), blocks separated by
    /// blank lines.
    std::string gnuplot() const;
};

/// Runs the convergence study: per level generate the mesh, sample the field,
/// apply every scheme and record all three norms globally and per cell class.
StudyResult run_study(const StudySpec& spec);

/// Nominal grid spacing of a family at a level (halves with every level).
double nominal_h(const GridSpec& grid, int level);

} // namespace fvgrad
