#include "fvgrad/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "fvgrad/errors.hpp"
#include "fvgrad/parallel.hpp"

namespace fvgrad {

std::pair<double, double> eps_norms(const GradientField& approx, const GradientField& exact,
                                    const Mesh& mesh, bool volume_weighted) {
    if (approx.size() != mesh.cells.size() || exact.size() != mesh.cells.size())
        throw std::invalid_argument("eps_norms: field sizes do not match the mesh");
    double sum = 0.0, weight = 0.0, max_err = 0.0;
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        const double e = norm(approx[c] - exact[c]);
        const double w = volume_weighted ? mesh.cells[c].volume : 1.0;
        sum += w * e;
        weight += w;
        max_err = std::max(max_err, e);
    }
    return {sum / weight, max_err};
}

double observed_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0))
        throw std::invalid_argument("observed_order needs positive errors");
    return std::log2(e_coarse / e_fine);
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
    if (errors.size() < 2)
        throw std::invalid_argument("observed_orders needs at least two levels");
    std::vector<double> orders;
    orders.reserve(errors.size() - 1);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        orders.push_back(observed_order(errors[i], errors[i + 1]));
    return orders;
}

std::vector<CellClass> classify_cells(const Mesh& mesh) {
    std::vector<CellClass> cls(mesh.cells.size(), CellClass::interior);
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        bool boundary = false, interface = false;
        for (int fi : mesh.cells[c].faces) {
            if (mesh.faces[fi].is_boundary())
                boundary = true;
            else if (mesh.level_jump(fi, static_cast<int>(c)) != 0)
                interface = true;
        }
        if (interface)
            cls[c] = CellClass::interface_cell;
        else if (boundary)
            cls[c] = CellClass::boundary;
    }
    return cls;
}

std::string to_string(CellClass c) {
    switch (c) {
        case CellClass::interior: return "interior";
        case CellClass::boundary: return "boundary";
        case CellClass::interface_cell: return "interface";
    }
    return "?";
}

double nominal_h(const GridSpec& grid, int level) {
    const double side = grid.domain.hi.x - grid.domain.lo.x;
    switch (grid.family) {
        case GridFamily::cartesian: return side / (grid.base_n << level);
        case GridFamily::perturbed: return side / (grid.base_n << (level + 1));
        case GridFamily::composite: return 1.0 / (8 << level); // coarse spacing
        case GridFamily::elliptic: return 0.25 / (1 << level); // computational spacing
    }
    return 0.0;
}

namespace {

struct ClassNorms {
    double mean, mean_vol, max;
};

/// Norms over one cell class (count mean, class-volume mean, max).
ClassNorms class_norms(const std::vector<double>& err, const Mesh& mesh,
                       const std::vector<CellClass>& cls, std::optional<CellClass> which) {
    double sum = 0.0, vsum = 0.0, vol = 0.0, mx = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < err.size(); ++c) {
        if (which && cls[c] != *which) continue;
        sum += err[c];
        vsum += err[c] * mesh.cells[c].volume;
        vol += mesh.cells[c].volume;
        mx = std::max(mx, err[c]);
        ++count;
    }
    if (count == 0) return {0.0, 0.0, 0.0};
    return {sum / count, vsum / vol, mx};
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

StudyResult run_study(const StudySpec& spec) {
    if (spec.level_end < spec.level_begin + 1)
        throw std::invalid_argument("a study needs at least two levels");
    if (spec.schemes.empty()) throw std::invalid_argument("a study needs at least one scheme");

    StudyResult result;
    // error history per (scheme, norm, class) for the order column
    std::map<std::string, std::vector<double>> history;

    EllipticGenerator elliptic(spec.elliptic);

    for (int level = spec.level_begin; level <= spec.level_end; ++level) {
        GridSpec gspec = spec.grid;
        gspec.level = level;
        const Mesh mesh =
            spec.grid.family == GridFamily::elliptic ? elliptic.mesh(level) : generate(gspec);
        const ScalarField phi = sample(spec.field, mesh);
        const GradientField exact = exact_gradient(spec.field, mesh);
        const std::vector<CellClass> cls = classify_cells(mesh);
        const double h = nominal_h(spec.grid, level);

        for (const SchemeConfig& scheme : spec.schemes) {
            const GradientField grad = compute_gradient(mesh, phi, scheme);
            std::vector<double> err(mesh.cells.size());
            parallel_for(mesh.cells.size(), [&](std::size_t c) { err[c] = norm(grad[c] - exact[c]); });

            const std::string qcol =
                scheme.scheme == SchemeConfig::Kind::least_squares
                    ? [&] { char b[16]; std::snprintf(b, sizeof(b), "%g", scheme.weight_exponent); return std::string(b); }()
                    : std::string();
            const std::string ccol = scheme.scheme == SchemeConfig::Kind::green_gauss
                                         ? std::to_string(scheme.correctors)
                                         : std::string();

            auto emit = [&](const std::string& norm_name, const std::string& class_name,
                            double value) {
                StudyRow row{to_string(spec.grid.family), level,   h,          scheme.label(),
                             qcol,                        ccol,    norm_name,  class_name,
                             value,                       std::nullopt};
                std::vector<double>& hist = history[scheme.label() + "|" + norm_name + "|" + class_name];
                if (!hist.empty() && hist.back() > 0.0 && value > 0.0)
                    row.order = observed_order(hist.back(), value);
                hist.push_back(value);
                result.rows.push_back(std::move(row));
            };

            const ClassNorms all = class_norms(err, mesh, cls, std::nullopt);
            emit("eps_mean", "all", all.mean);
            emit("eps_mean_vol", "all", all.mean_vol);
            emit("eps_max", "all", all.max);
            for (const CellClass cc :
                 {CellClass::interior, CellClass::boundary, CellClass::interface_cell}) {
                const ClassNorms n = class_norms(err, mesh, cls, cc);
                emit("eps_mean", to_string(cc), n.mean);
                emit("eps_mean_vol", to_string(cc), n.mean_vol);
                emit("eps_max", to_string(cc), n.max);
            }
        }
    }
    return result;
}

std::vector<double> StudyResult::series(const std::string& scheme, const std::string& norm,
                                        const std::string& cell_class) const {
    std::vector<double> values;
    for (const StudyRow& row : rows)
        if (row.scheme == scheme && row.norm == norm && row.cell_class == cell_class)
            values.push_back(row.value);
    return values;
}

std::string StudyResult::csv() const {
    std::string out = "family,level,h,scheme,q,correctors,norm,cell_class,value,observed_order\n";
    for (const StudyRow& r : rows) {
        out += r.family + "," + std::to_string(r.level) + "," + fmt17(r.h) + "," + r.scheme + "," +
               r.q + "," + r.correctors + "," + r.norm + "," + r.cell_class + "," + fmt17(r.value) +
               "," + (r.order ? fmt17(*r.order) : "") + "\n";
    }
    return out;
}

std::string StudyResult::gnuplot() const {
    // rows interleave across levels; regroup into one block per curve
    std::vector<std::string> block_order;
    std::map<std::string, std::string> blocks;
    for (const StudyRow& r : rows) {
        if (r.cell_class != "all") continue;
        const std::string key = "# scheme=" + r.scheme + " norm=" + r.norm + "\n";
        auto it = blocks.find(key);
        if (it == blocks.end()) {
            it = blocks.emplace(key, key).first;
            block_order.push_back(key);
        }
        it->second += std::to_string(r.level) + " " + fmt17(r.h) + " " + fmt17(r.value) + "\n";
    }
    std::string out;
    for (const std::string& key : block_order) {
        if (!out.empty()) out += "\n\n";
        out += blocks[key];
    }
    return out;
}

} // namespace fvgrad
