#include "cli.hpp"

#include "isogk/complex_file.hpp"
#include "isogk/error.hpp"
#include "isogk/galerkin.hpp"
#include "isogk/isogeo.hpp"
#include "isogk/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace isogk::cli {

namespace {

constexpr int kDefaultLemmaSamples = 25;
constexpr double kSolveLemmaTolerance = 1e-7;

// A failed verification, reported with exit code 1.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::string edge_label(const InterfaceEdge& e, std::size_t index) {
    std::ostringstream os;
    os << "edge " << index << " (patch " << e.patch_a << ' ' << to_string(e.edge_a) << " / patch " << e.patch_b
       << ' ' << to_string(e.edge_b) << ')';
    return os.str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << std::setprecision(17);
    return out;
}

std::vector<double> grid_params(int resolution) {
    std::vector<double> t(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(i) / (resolution - 1);
    return t;
}

const FieldEntry& pick_field(const ComplexFile& file, const std::string& name) {
    if (!name.empty()) return find_field(file, name);
    if (file.fields.empty()) throw FormatError("complex file stores no field");
    return file.fields.front();
}

void require_planar_geometry(const PatchComplex& c, const char* what) {
    if (!c.has_geometry()) throw FormatError(std::string(what) + ": complex file has no geometry");
    if (c.geometry.front().out_dim() != 2) throw ContractError(std::string(what) + ": needs a planar geometry");
}

// ---- build-cap ----------------------------------------------------------------

struct BuildCapArgs {
    int n = 0;
    std::vector<int> degree{3};
    int k = 1;
    std::uint64_t seed = 0;
    std::string out = "cap.json";
};

int build_cap(const BuildCapArgs& a, std::ostream& out) {
    if (a.n < 3) throw ContractError("--n must be at least 3, got " + std::to_string(a.n));
    const int p = a.degree.front();
    const int q = a.degree.size() > 1 ? a.degree[1] : p;
    const GSmoothSpace bare = build_gsmooth_space(build_complex(a.n, p, q), a.k);
    const GSmoothSpace space = with_geometry(bare, make_geometry(bare));
    ComplexFile file = make_complex_file(space);
    Rng rng(a.seed);
    file.fields.push_back({"random", rng.vector(space.dimension())});
    write_complex_file(a.out, file);

    const auto audit = audit_injectivity(space.complex.geometry);
    out << std::setprecision(17) << "n=" << a.n << "\nbidegree=" << p << ',' << q << "\nk=" << a.k << "\ndimension=" << space.dimension()
        << "\nresidual=" << space.constraint_residual << "\nmin_abs_det=" << audit.min_abs_det << "\nseed=" << a.seed
        << "\nout=" << a.out << '\n';
    return kPass;
}

// ---- check --------------------------------------------------------------------

struct CheckArgs {
    std::string file;
    std::optional<int> k;
    int samples = kDefaultLemmaSamples;
    double tol = kDefaultCheckTolerance;
    std::string out;
};

int check(const CheckArgs& a, std::ostream& out) {
    const ComplexFile file = read_complex_file(a.file);
    const PatchComplex& c = file.complex;
    const int k = a.k.value_or(file.space ? file.space->k : 1);
    std::optional<std::ofstream> csv;
    if (!a.out.empty()) {
        csv = open_output(a.out);
        *csv << "edge,target,s,mismatch\n";
    }

    const bool planar = c.has_geometry() && c.geometry.front().out_dim() == 2;
    std::optional<GSmoothSpace> space;
    if (file.space && planar) space = space_of(file);

    std::string first_failure;
    auto record = [&](std::size_t index, const std::string& target, const SmoothnessReport& r) {
        out << "edge=" << index << " target=" << target << ' ' << report_summary(r) << '\n';
        if (csv)
            for (std::size_t i = 0; i < r.sample_params.size(); ++i)
                *csv << index << ',' << target << ',' << r.sample_params[i] << ',' << r.per_sample_mismatch[i] << '\n';
        if (!r.pass && first_failure.empty()) {
            std::ostringstream os;
            os << std::setprecision(17) << edge_label(c.edges[index], index) << " fails G^" << k << " on " << target
               << ": max mismatch " << r.max_mismatch << " >= " << r.tolerance;
            first_failure = os.str();
        }
    };

    out << std::setprecision(17);
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
        const auto& e = c.edges[i];
        if (c.has_geometry())
            record(i, "geometry",
                   check_gk(c.geometry[static_cast<std::size_t>(e.patch_a)],
                            c.geometry[static_cast<std::size_t>(e.patch_b)], e.rho, k, a.samples, a.tol));
        if (!space) continue;
        for (const auto& f : file.fields) {
            const auto elems = make_elements(*space, f.coeffs);
            record(i, "field:" + f.name,
                   lemma_check(elems[static_cast<std::size_t>(e.patch_a)], elems[static_cast<std::size_t>(e.patch_b)],
                               e.rho, k, a.samples, a.tol));
        }
    }
    if (!first_failure.empty()) {
        out << "result=fail\n";
        throw VerificationFailure(first_failure);
    }
    out << "result=pass\n";
    return kPass;
}

// ---- solve --------------------------------------------------------------------

struct SolveArgs {
    std::string file;
    std::string problem = "reaction";
    int quadrature = 0;
    std::string out;
    int resolution = 5;
    std::string field;
    std::optional<double> tol;
};

int solve(const SolveArgs& a, std::ostream& out) {
    if (a.resolution < 2) throw ContractError("--resolution must be at least 2");
    const ComplexFile file = read_complex_file(a.file);
    require_planar_geometry(file.complex, "solve");
    const GSmoothSpace space = space_of(file);
    const int g = a.quadrature > 0 ? a.quadrature : default_quadrature_order(space.complex);
    DiscreteProblem problem = assemble(space, g);

    out << std::setprecision(17) << "problem=" << a.problem << "\nquadrature=" << g
        << "\ndimension=" << space.dimension() << "\narea=" << domain_area(problem) << '\n';

    Eigen::VectorXd sol;
    bool pass = true;
    std::string why;
    if (a.problem == "project") {
        const ScalarCallback one = [](const QuadraturePoint&) { return 1.0; };
        sol = l2_project(problem, one);
        const double tol = a.tol.value_or(1e-9);
        double worst = 0.0;
        for (int p = 0; p < space.complex.n; ++p)
            for (double u : grid_params(a.resolution))
                for (double v : grid_params(a.resolution))
                    worst = std::max(worst, std::abs(evaluate_field(space, sol, p, {u, v}) - 1.0));
        out << "target=constant\nmax_sample_error=" << worst << "\nl2_error=" << l2_error(problem, sol, one) << '\n';
        if (!(worst < tol)) {
            pass = false;
            why = "projection of the constant misses by " + std::to_string(worst);
        }
    } else {
        const FieldEntry& exact = pick_field(file, a.field);
        const ScalarCallback u_exact = field_callback(space, exact.coeffs);
        sol = solve_poisson(problem, manufactured_rhs(space, exact.coeffs, 1.0), u_exact, 1.0);
        const double tol = a.tol.value_or(1e-6);
        const double coeff_error = (sol - exact.coeffs).cwiseAbs().maxCoeff();
        const auto elems = make_elements(space, sol);
        double lemma = 0.0;
        for (const auto& e : space.complex.edges)
            lemma = std::max(lemma, lemma_check(elems[static_cast<std::size_t>(e.patch_a)],
                                                elems[static_cast<std::size_t>(e.patch_b)], e.rho, 1,
                                                kDefaultLemmaSamples, kSolveLemmaTolerance)
                                        .max_mismatch);
        out << "manufactured=" << exact.name << "\ncoefficient_error=" << coeff_error
            << "\nl2_error=" << l2_error(problem, sol, u_exact) << "\nlemma_max_mismatch=" << lemma << '\n';
        if (!(coeff_error < tol)) {
            pass = false;
            why = "coefficient error " + std::to_string(coeff_error) + " above tolerance";
        } else if (!(lemma < kSolveLemmaTolerance)) {
            pass = false;
            why = "solved field is not C^1 across an interface (lemma mismatch " + std::to_string(lemma) + ")";
        }
    }

    if (!a.out.empty()) {
        auto csv = open_output(a.out);
        csv << "x,y,u\n";
        for (int p = 0; p < space.complex.n; ++p)
            for (double u : grid_params(a.resolution))
                for (double v : grid_params(a.resolution)) {
                    const Eigen::VectorXd x = space.complex.geometry[static_cast<std::size_t>(p)].eval({u, v});
                    csv << x[0] << ',' << x[1] << ',' << evaluate_field(space, sol, p, {u, v}) << '\n';
                }
        out << "out=" << a.out << '\n';
    }
    out << "result=" << (pass ? "pass" : "fail") << '\n';
    if (!pass) throw VerificationFailure(why);
    return kPass;
}

// ---- export -------------------------------------------------------------------

struct ExportArgs {
    std::string file;
    std::string what = "surface";
    std::string format = "csv";
    int resolution = 10;
    std::string out;
    std::string field;
    int k = 1;
    int samples = kDefaultLemmaSamples;
};

// Grid samples of one patch: position (padded to 3D) and the optional value.
struct Sample {
    Point2 param;
    Eigen::Vector3d x;
    double value;
};

std::vector<Sample> sample_patch(const TensorPatch& geometry, const TensorPatch* field, int resolution) {
    std::vector<Sample> out;
    for (double u : grid_params(resolution))
        for (double v : grid_params(resolution)) {
            const Eigen::VectorXd g = geometry.eval({u, v});
            Eigen::Vector3d x = Eigen::Vector3d::Zero();
            x.head(g.size()) = g;
            out.push_back({{u, v}, x, field ? field->eval({u, v})[0] : 0.0});
        }
    return out;
}

void write_obj(std::ostream& os, const std::vector<std::vector<Sample>>& patches, int resolution, bool height) {
    os << "# isogk export, " << patches.size() << " patches, " << resolution << 'x' << resolution << " grid\n";
    for (const auto& patch : patches)
        for (const auto& s : patch) os << "v " << s.x[0] << ' ' << s.x[1] << ' ' << (height ? s.value : s.x[2]) << '\n';
    const int per_patch = resolution * resolution;
    for (std::size_t p = 0; p < patches.size(); ++p) {
        const auto& samples = patches[p];
        for (int i = 0; i + 1 < resolution; ++i)
            for (int j = 0; j + 1 < resolution; ++j) {
                // Corners in increasing (u, v) order around the cell.
                std::array<int, 4> corner{i * resolution + j, (i + 1) * resolution + j, (i + 1) * resolution + j + 1,
                                          i * resolution + j + 1};
                // Keep faces counterclockwise in the plane whatever the patch orientation.
                const Eigen::Vector3d a = samples[static_cast<std::size_t>(corner[0])].x;
                const Eigen::Vector3d b = samples[static_cast<std::size_t>(corner[1])].x;
                const Eigen::Vector3d c = samples[static_cast<std::size_t>(corner[2])].x;
                const Eigen::Vector3d d = samples[static_cast<std::size_t>(corner[3])].x;
                if ((c - a).cross(d - b)[2] < 0.0) std::swap(corner[1], corner[3]);
                os << 'f';
                for (int v : corner) os << ' ' << static_cast<int>(p) * per_patch + v + 1;
                os << '\n';
            }
    }
}

int export_file(const ExportArgs& a, std::ostream& out) {
    if (a.resolution < 2) throw ContractError("--resolution must be at least 2");
    if (a.out.empty()) throw ContractError("--out is required");
    const ComplexFile file = read_complex_file(a.file);
    const PatchComplex& c = file.complex;
    if (!c.has_geometry()) throw FormatError("export: complex file has no geometry");
    auto os = open_output(a.out);
    std::size_t rows = 0;

    if (a.what == "report") {
        if (a.format != "csv") throw ContractError("export: reports are written as csv only");
        os << "edge,s,mismatch\n";
        for (std::size_t i = 0; i < c.edges.size(); ++i) {
            const auto& e = c.edges[i];
            const auto r = check_gk(c.geometry[static_cast<std::size_t>(e.patch_a)],
                                    c.geometry[static_cast<std::size_t>(e.patch_b)], e.rho, a.k, a.samples);
            for (std::size_t j = 0; j < r.sample_params.size(); ++j, ++rows)
                os << i << ',' << r.sample_params[j] << ',' << r.per_sample_mismatch[j] << '\n';
            os << "# edge=" << i << ' ' << report_summary(r) << '\n';
        }
    } else {
        std::vector<TensorPatch> fields;
        if (a.what == "field") {
            require_planar_geometry(c, "export field");
            fields = sample_field(space_of(file), pick_field(file, a.field).coeffs);
        } else if (a.what != "surface") {
            throw ContractError("export: --what must be surface, field or report");
        }
        std::vector<std::vector<Sample>> patches;
        for (int p = 0; p < c.n; ++p)
            patches.push_back(sample_patch(c.geometry[static_cast<std::size_t>(p)],
                                           fields.empty() ? nullptr : &fields[static_cast<std::size_t>(p)],
                                           a.resolution));
        if (a.format == "obj") {
            write_obj(os, patches, a.resolution, !fields.empty());
            rows = patches.size() * static_cast<std::size_t>(a.resolution * a.resolution);
        } else if (a.format == "csv") {
            os << "patch,u,v,x,y,z" << (fields.empty() ? "" : ",value") << '\n';
            for (std::size_t p = 0; p < patches.size(); ++p)
                for (const auto& s : patches[p]) {
                    os << p << ',' << s.param[0] << ',' << s.param[1] << ',' << s.x[0] << ',' << s.x[1] << ','
                       << s.x[2];
                    if (!fields.empty()) os << ',' << s.value;
                    os << '\n';
                    ++rows;
                }
        } else {
            throw ContractError("export: --format must be csv or obj");
        }
    }
    if (!os) throw FormatError("failed writing " + a.out);
    out << "what=" << a.what << "\nformat=" << a.format << "\nrows=" << rows << "\nout=" << a.out << '\n';
    return kPass;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geometrically smooth multipatch spaces around an extraordinary vertex", "isogk"};
    app.require_subcommand(1);

    BuildCapArgs cap;
    auto* cap_cmd = app.add_subcommand("build-cap", "Build the G^k space of an n-patch cap and write a complex file");
    cap_cmd->add_option("--n", cap.n, "Number of patches around the vertex")->required();
    cap_cmd->add_option("--degree", cap.degree, "Bidegree p [q]")->expected(1, 2);
    cap_cmd->add_option("--k", cap.k, "Smoothness order")->capture_default_str();
    cap_cmd->add_option("--seed", cap.seed, "Seed of the stored random field")->capture_default_str();
    cap_cmd->add_option("--out", cap.out, "Output complex file")->capture_default_str();

    CheckArgs chk;
    auto* check_cmd = app.add_subcommand("check", "Verify G^k of the geometry and C^k of the stored fields");
    check_cmd->add_option("file", chk.file, "Complex file")->required();
    check_cmd->add_option("--k", chk.k, "Smoothness order (default: the stored space's)");
    check_cmd->add_option("--samples", chk.samples, "Samples per edge")->capture_default_str();
    check_cmd->add_option("--tol", chk.tol, "Mismatch tolerance")->capture_default_str();
    check_cmd->add_option("--out", chk.out, "Per-sample CSV report");

    SolveArgs slv;
    auto* solve_cmd = app.add_subcommand("solve", "Galerkin projection or manufactured reaction solve");
    solve_cmd->add_option("file", slv.file, "Complex file")->required();
    solve_cmd->add_option("--problem", slv.problem, "project | reaction")
        ->check(CLI::IsMember({"project", "reaction"}))
        ->capture_default_str();
    solve_cmd->add_option("--quadrature", slv.quadrature, "Gauss points per direction (0: default)");
    solve_cmd->add_option("--out", slv.out, "Solution samples as x,y,u CSV");
    solve_cmd->add_option("--resolution", slv.resolution, "Samples per direction and patch")->capture_default_str();
    solve_cmd->add_option("--field", slv.field, "Stored field used as the exact solution");
    solve_cmd->add_option("--tol", slv.tol, "Pass tolerance (project 1e-9, reaction 1e-6)");

    ExportArgs exp;
    auto* export_cmd = app.add_subcommand("export", "Sample the geometry, a field or the edge report to a file");
    export_cmd->add_option("file", exp.file, "Complex file")->required();
    export_cmd->add_option("--what", exp.what, "surface | field | report")
        ->check(CLI::IsMember({"surface", "field", "report"}))
        ->capture_default_str();
    export_cmd->add_option("--format", exp.format, "csv | obj")
        ->check(CLI::IsMember({"csv", "obj"}))
        ->capture_default_str();
    export_cmd->add_option("--resolution", exp.resolution, "Samples per direction and patch")->capture_default_str();
    export_cmd->add_option("--out", exp.out, "Output file")->required();
    export_cmd->add_option("--field", exp.field, "Stored field name");
    export_cmd->add_option("--k", exp.k, "Order of the edge report")->capture_default_str();
    export_cmd->add_option("--samples", exp.samples, "Samples per edge in the report")->capture_default_str();

    auto fail = [&](const char* reason, const std::string& what, int code) {
        err << "error[" << reason << "]: " << one_line(what) << '\n';
        return code;
    };
    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kPass;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kPass;
        }
        if (cap_cmd->parsed()) return build_cap(cap, out);
        if (check_cmd->parsed()) return check(chk, out);
        if (solve_cmd->parsed()) return solve(slv, out);
        return export_file(exp, out);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), kUsageError);
    } catch (const VerificationFailure& e) {
        return fail("verification", e.what(), kVerificationFailure);
    } catch (const FormatError& e) {
        return fail("input", e.what(), kUsageError);
    } catch (const ContractError& e) {
        return fail("usage", e.what(), kUsageError);
    } catch (const NumericalError& e) {
        return fail("numerical", e.what(), kNumericalFailure);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kNumericalFailure);
    }
}

} // namespace isogk::cli
