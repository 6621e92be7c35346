#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fvgrad/analysis.hpp"
#include "fvgrad/errors.hpp"
#include "fvgrad/fields.hpp"
#include "fvgrad/gradient.hpp"
#include "fvgrad/grid_gen.hpp"
#include "fvgrad/ls1d.hpp"
#include "fvgrad/mesh_io.hpp"
#include "fvgrad/parallel.hpp"
#include "fvgrad/poisson.hpp"

namespace {

using namespace fvgrad;

struct LevelRange {
    int begin = 0;
    int end = 4;
};

LevelRange parse_levels(const std::string& text) {
    const auto pos = text.find("..");
    if (pos == std::string::npos)
        throw CLI::ValidationError("--levels", "expected inclusive range a..b");
    LevelRange r;
    r.begin = std::stoi(text.substr(0, pos));
    r.end = std::stoi(text.substr(pos + 2));
    if (r.begin < 0 || r.end < r.begin)
        throw CLI::ValidationError("--levels", "range must satisfy 0 <= a <= b");
    return r;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    return values;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

/// Optional --config file: the same structured-object notation as the mesh
/// format, holding long-option-name -> value pairs that override command-line
/// flags. Returns argv tokens to append (appended last, so they win).
std::vector<std::string> config_overrides(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::runtime_error("config file must hold a single object");
    std::vector<std::string> tokens;
    for (const auto& [key, value] : j.items()) {
        tokens.push_back("--" + key);
        if (value.is_string())
            tokens.push_back(value.get<std::string>());
        else
            tokens.push_back(value.dump());
    }
    return tokens;
}

SchemeConfig scheme_from_flags(const std::string& scheme, int correctors, double q,
                               const std::string& interface_weights) {
    SchemeConfig cfg;
    if (scheme == "gg") {
        cfg.scheme = SchemeConfig::Kind::green_gauss;
        cfg.correctors = correctors;
    } else if (scheme == "ls") {
        cfg.scheme = SchemeConfig::Kind::least_squares;
        cfg.weight_exponent = q;
        cfg.interface_weight_mod = interface_weights == "on";
    } else {
        throw CLI::ValidationError("--scheme", "must be gg or ls");
    }
    return cfg;
}

int run(int argc, char** argv) {
    CLI::App app{"Finite-volume gradient reconstruction toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // --threads / --config may follow the subcommand
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores)");
    std::string config_path;
    app.add_option("--config", config_path, "structured config file overriding flags");

    // ---- grid ----
    auto* grid = app.add_subcommand("grid", "generate or validate meshes");
    std::string g_family = "cartesian";
    int g_level = 0;
    int g_base_n = 4;
    std::uint64_t g_seed = 0;
    std::string g_variant = "free";
    std::string g_out;
    std::string g_validate;
    grid->add_option("--family", g_family, "cartesian|perturbed|composite|elliptic");
    grid->add_option("--level", g_level, "refinement level r");
    grid->add_option("--base-n", g_base_n, "cells per side at level 0");
    grid->add_option("--seed", g_seed, "perturbation seed");
    grid->add_option("--boundary", g_variant, "perturbed boundary: free|straight");
    int g_solver_n = 513;
    grid->add_option("--solver-n", g_solver_n, "elliptic solver nodes per side (2^k + 1)");
    grid->add_option("--out", g_out, "mesh output path");
    grid->add_option("--validate", g_validate, "validate a mesh file instead of generating");

    // ---- ls1d ----
    auto* ls1d = app.add_subcommand("ls1d", "1D least-squares derivative experiment");
    std::string l_stencil = "-0.10,0.10";
    int l_halvings = 5;
    std::string l_methods = "q0,q1,q1.5,q2,q3,G";
    std::string l_out;
    ls1d->add_option("--stencil", l_stencil, "comma list of displacements");
    ls1d->add_option("--halvings", l_halvings, "number of displacement halvings");
    ls1d->add_option("--methods", l_methods, "comma list, e.g. q0,q1.5,G");
    ls1d->add_option("--out", l_out, "CSV output path");

    // ---- gradient / study ----
    auto add_study_flags = [](CLI::App* cmd, std::string& family, std::string& levels,
                              int& base_n, std::uint64_t& seed, std::string& field,
                              std::string& out, int& solver_n, std::string& variant) {
        cmd->add_option("--grid", family, "cartesian|perturbed|composite|elliptic");
        cmd->add_option("--levels", levels, "inclusive level range a..b");
        cmd->add_option("--base-n", base_n, "cells per side at level 0");
        cmd->add_option("--seed", seed, "perturbation seed");
        cmd->add_option("--field", field, "tanh|sin|linear|quadratic");
        cmd->add_option("--out", out, "CSV output path");
        cmd->add_option("--solver-n", solver_n, "elliptic solver nodes per side (2^k + 1)");
        cmd->add_option("--boundary", variant, "perturbed boundary: free|straight");
    };

    auto* gradient = app.add_subcommand("gradient", "convergence study of one gradient scheme");
    std::string gr_family = "cartesian", gr_levels = "0..7", gr_field = "tanh", gr_out;
    int gr_base_n = 4, gr_solver_n = 513;
    std::uint64_t gr_seed = 0;
    std::string gr_scheme = "ls", gr_iw = "off", gr_variant = "free";
    int gr_correctors = 0;
    double gr_q = 1.0;
    add_study_flags(gradient, gr_family, gr_levels, gr_base_n, gr_seed, gr_field, gr_out,
                    gr_solver_n, gr_variant);
    gradient->add_option("--scheme", gr_scheme, "gg|ls");
    gradient->add_option("--correctors", gr_correctors, "Green-Gauss corrector steps");
    gradient->add_option("--q", gr_q, "least-squares weight exponent");
    gradient->add_option("--interface-weights", gr_iw, "on|off");

    auto* study = app.add_subcommand("study", "convergence study of several schemes");
    std::string st_family = "cartesian", st_levels = "0..7", st_field = "tanh", st_out;
    int st_base_n = 4, st_solver_n = 513;
    std::uint64_t st_seed = 0;
    std::string st_schemes = "gg:d0,gg:d1,ls:q0,ls:q1,ls:q1.5,ls:q2", st_variant = "free";
    add_study_flags(study, st_family, st_levels, st_base_n, st_seed, st_field, st_out,
                    st_solver_n, st_variant);
    study->add_option("--schemes", st_schemes, "comma list of scheme labels (gg:d1, ls:q1.5, ls:q2:iw)");

    // ---- poisson ----
    auto* poisson = app.add_subcommand("poisson", "manufactured diffusion convergence study");
    std::string p_flux = "overrelaxed", p_problem = "tanh", p_grid = "cartesian",
                p_levels = "0..3", p_out;
    std::string p_scheme = "ls", p_iw = "off";
    int p_correctors = 0, p_base_n = 32;
    double p_q = 1.0, p_relax = 1.0;
    std::uint64_t p_seed = 0;
    poisson->add_option("--flux", p_flux, "overrelaxed|standard");
    poisson->add_option("--scheme", p_scheme, "gg|ls");
    poisson->add_option("--correctors", p_correctors, "Green-Gauss corrector steps");
    poisson->add_option("--q", p_q, "least-squares weight exponent");
    poisson->add_option("--interface-weights", p_iw, "on|off");
    poisson->add_option("--problem", p_problem, "tanh|sin");
    poisson->add_option("--grid", p_grid, "cartesian|perturbed");
    poisson->add_option("--levels", p_levels, "inclusive level range a..b");
    poisson->add_option("--base-n", p_base_n, "cells per side at level 0");
    poisson->add_option("--seed", p_seed, "perturbation seed");
    poisson->add_option("--relax", p_relax, "outer-loop under-relaxation factor");
    poisson->add_option("--out", p_out, "CSV output path");

    // parse; a config file re-runs the parse with its overrides appended
    // (CLI11's vector overload wants the tokens reversed)
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
        if (!config_path.empty()) {
            const std::vector<std::string> extra = config_overrides(config_path);
            args.insert(args.end(), extra.begin(), extra.end());
            app.clear();
            app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
        }
    } catch (const CLI::ParseError& e) {
        // flag problems are validation errors (exit 1); --help stays 0
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    set_max_threads(threads);

    if (grid->parsed()) {
        if (!g_validate.empty()) {
            const Mesh mesh = read_mesh_file(g_validate);
            const ValidationReport report = validate_mesh(mesh);
            for (const std::string& v : report.violations) std::cerr << v << "\n";
            std::cout << g_validate << ": " << mesh.cells.size() << " cells, "
                      << report.violations.size() << " violations\n";
            return report.ok() ? 0 : 2;
        }
        GridSpec spec;
        spec.family = parse_grid_family(g_family);
        spec.level = g_level;
        spec.base_n = g_base_n;
        spec.seed = g_seed;
        spec.variant = g_variant == "straight" ? PerturbVariant::straight_boundary
                                               : PerturbVariant::free_boundary;
        Mesh mesh;
        if (spec.family == GridFamily::elliptic) {
            EllipticGridSpec espec;
            espec.solver_n = g_solver_n;
            mesh = gen_elliptic(espec, g_level);
        } else {
            mesh = generate(spec);
        }
        if (g_out.empty()) throw CLI::ValidationError("--out", "mesh output path required");
        write_mesh_file(mesh, g_out);
        std::cout << g_out << ": " << mesh.cells.size() << " cells, " << mesh.faces.size()
                  << " faces\n";
        return 0;
    }

    if (ls1d->parsed()) {
        Experiment1D exp;
        exp.stencil = parse_number_list(l_stencil);
        exp.halvings = l_halvings;
        std::stringstream ss(l_methods);
        std::string item;
        while (std::getline(ss, item, ',')) exp.methods.push_back(Method1D::parse(item));
        const Experiment1DResult result = run_experiment(exp);
        const std::string csv = result.csv(exp);
        if (!l_out.empty())
            write_file(l_out, csv);
        else
            std::cout << csv;
        return 0;
    }

    if (gradient->parsed() || study->parsed()) {
        const bool single = gradient->parsed();
        StudySpec spec;
        spec.grid.family = parse_grid_family(single ? gr_family : st_family);
        spec.grid.base_n = single ? gr_base_n : st_base_n;
        spec.grid.seed = single ? gr_seed : st_seed;
        spec.grid.variant = (single ? gr_variant : st_variant) == "straight"
                                ? PerturbVariant::straight_boundary
                                : PerturbVariant::free_boundary;
        spec.elliptic.solver_n = single ? gr_solver_n : st_solver_n;
        const LevelRange levels = parse_levels(single ? gr_levels : st_levels);
        spec.level_begin = levels.begin;
        spec.level_end = levels.end;
        spec.field = AnalyticField::by_name(single ? gr_field : st_field);
        if (single) {
            spec.schemes.push_back(scheme_from_flags(gr_scheme, gr_correctors, gr_q, gr_iw));
        } else {
            std::stringstream ss(st_schemes);
            std::string item;
            while (std::getline(ss, item, ',')) spec.schemes.push_back(SchemeConfig::parse(item));
        }
        const StudyResult result = run_study(spec);
        const std::string out_path = single ? gr_out : st_out;
        if (!out_path.empty()) {
            write_file(out_path, result.csv());
            write_file(out_path + ".dat", result.gnuplot());
        } else {
            std::cout << result.csv();
        }
        return 0;
    }

    if (poisson->parsed()) {
        FluxScheme flux;
        if (p_flux == "overrelaxed")
            flux.kind = FluxKind::overrelaxed;
        else if (p_flux == "standard")
            flux.kind = FluxKind::standard;
        else
            throw CLI::ValidationError("--flux", "must be overrelaxed or standard");
        flux.gradient = scheme_from_flags(p_scheme, p_correctors, p_q, p_iw);
        if (p_problem != "sin" && p_problem != "tanh")
            throw CLI::ValidationError("--problem", "must be tanh or sin");
        const PoissonProblem problem =
            p_problem == "sin" ? PoissonProblem::sin_problem() : PoissonProblem::tanh_problem();
        const LevelRange levels = parse_levels(p_levels);

        SolverControls controls;
        controls.relaxation = p_relax;

        std::string csv = "level,h,eps_mean,eps_max,order\n";
        double prev_mean = 0.0;
        char buf[160];
        for (int level = levels.begin; level <= levels.end; ++level) {
            Mesh mesh;
            double h = 0.0;
            if (p_grid == "cartesian") {
                GridSpec spec;
                spec.family = GridFamily::cartesian;
                spec.base_n = p_base_n;
                spec.level = level;
                mesh = gen_cartesian(spec);
                h = 1.0 / (p_base_n << level);
            } else if (p_grid == "perturbed") {
                // same cell count per level as the Cartesian series
                if (p_base_n % 2 != 0)
                    throw CLI::ValidationError("--base-n", "must be even for perturbed grids");
                GridSpec spec;
                spec.family = GridFamily::perturbed;
                spec.base_n = p_base_n / 2;
                spec.level = level;
                spec.seed = p_seed;
                spec.variant = PerturbVariant::straight_boundary;
                mesh = gen_perturbed(spec);
                h = 1.0 / (p_base_n << level);
            } else {
                throw CLI::ValidationError("--grid", "poisson runs on cartesian or perturbed grids");
            }
            const SolveReport report = solve_poisson(mesh, problem, flux, controls);
            if (report.stagnated)
                std::cerr << "level " << level << ": outer iteration stagnated at residual "
                          << report.residual << "\n";
            else if (!report.converged)
                std::cerr << "level " << level << ": outer iteration did not converge (residual "
                          << report.residual << ")\n";
            if (!report.converged && !report.stagnated) return 2;
            if (level == levels.begin)
                std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,\n", level, h,
                              report.eps_mean, report.eps_max);
            else
                std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", level, h,
                              report.eps_mean, report.eps_max,
                              std::log2(prev_mean / report.eps_mean));
            csv += buf;
            prev_mean = report.eps_mean;
        }
        if (!p_out.empty())
            write_file(p_out, csv);
        else
            std::cout << csv;
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fvgrad::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
