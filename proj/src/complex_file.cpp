#include "isogk/complex_file.hpp"

#include "isogk/error.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <sstream>

namespace isogk {

namespace {

using json = nlohmann::json;

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

const json& member(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw FormatError(std::string("complex file: missing \"") + key + "\"");
    return obj.at(key);
}

template <class T>
T get(const json& obj, const char* key) {
    try {
        return member(obj, key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("complex file: \"") + key + "\" has the wrong type");
    }
}

Eigen::VectorXd vector_from(const json& arr, const char* what) {
    if (!arr.is_array()) throw FormatError(std::string("complex file: ") + what + " must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) throw FormatError(std::string("complex file: ") + what + " holds a non-number");
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

json edge_json(const InterfaceEdge& e) {
    return {{"patch_a", e.patch_a},
            {"edge_a", std::string(to_string(e.edge_a))},
            {"patch_b", e.patch_b},
            {"edge_b", std::string(to_string(e.edge_b))},
            {"shear_coeffs", e.rho.shear_coeffs},
            {"normal_scale", e.rho.normal_scale}};
}

EdgeId edge_id(const json& obj, const char* key) {
    return edge_from_string(get<std::string>(obj, key));
}

InterfaceEdge edge_from(const json& obj) {
    InterfaceEdge e;
    e.patch_a = get<int>(obj, "patch_a");
    e.edge_a = edge_id(obj, "edge_a");
    e.patch_b = get<int>(obj, "patch_b");
    e.edge_b = edge_id(obj, "edge_b");
    e.rho.edge_from = e.edge_a;
    e.rho.edge_to = e.edge_b;
    e.rho.shear_coeffs = get<std::vector<double>>(obj, "shear_coeffs");
    e.rho.normal_scale = get<double>(obj, "normal_scale");
    return e;
}

// Sides of the squares that no interior edge uses.
std::vector<BoundaryEdge> free_sides(const PatchComplex& c) {
    std::vector<BoundaryEdge> out;
    for (int p = 0; p < c.n; ++p)
        for (EdgeId side : kAllEdges) {
            bool used = false;
            for (const auto& e : c.edges)
                used = used || (e.patch_a == p && e.edge_a == side) || (e.patch_b == p && e.edge_b == side);
            if (!used) out.push_back({p, side});
        }
    return out;
}

json patch_json(const TensorPatch& patch) {
    json net = json::array();
    for (int i = 0; i <= patch.degree_u(); ++i)
        for (int j = 0; j <= patch.degree_v(); ++j) {
            json point = json::array();
            for (int c = 0; c < patch.out_dim(); ++c) point.push_back(patch.at(i, j, c));
            net.push_back(std::move(point));
        }
    return net;
}

TensorPatch patch_from(const json& net, int p, int q) {
    if (!net.is_array() || static_cast<int>(net.size()) != (p + 1) * (q + 1))
        throw FormatError("complex file: control net size does not match the bidegree");
    const int d = net.front().is_array() ? static_cast<int>(net.front().size()) : 0;
    if (d < 1 || d > 3) throw FormatError("complex file: control points must have 1 to 3 coordinates");
    std::vector<double> control;
    for (const auto& point : net) {
        const Eigen::VectorXd x = vector_from(point, "control point");
        if (x.size() != d) throw FormatError("complex file: control points of one net differ in dimension");
        control.insert(control.end(), x.data(), x.data() + d);
    }
    return TensorPatch(p, q, d, std::move(control));
}

} // namespace

ComplexFile make_complex_file(const GSmoothSpace& space) {
    ComplexFile f;
    f.complex = space.complex;
    f.space = SpaceRecord{space.k, space.constraint_residual, space.basis};
    return f;
}

GSmoothSpace space_of(const ComplexFile& file) {
    if (!file.space) throw FormatError("complex file carries no space");
    GSmoothSpace s;
    s.complex = file.complex;
    s.k = file.space->k;
    s.constraint_residual = file.space->residual;
    s.basis = file.space->basis;
    return s;
}

const FieldEntry& find_field(const ComplexFile& file, std::string_view name) {
    for (const auto& f : file.fields)
        if (f.name == name) return f;
    throw FormatError("complex file has no field named \"" + std::string(name) + "\"");
}

std::string serialize(const ComplexFile& file) {
    const PatchComplex& c = file.complex;
    json doc;
    doc["format"] = kComplexFileFormat;
    doc["version"] = kComplexFileVersion;
    doc["n"] = c.n;
    doc["bidegree"] = {c.degree_u, c.degree_v};
    json patches = json::array();
    for (const auto& g : c.geometry) patches.push_back(patch_json(g));
    doc["patches"] = std::move(patches);
    json edges = json::array();
    for (const auto& e : c.edges) edges.push_back(edge_json(e));
    doc["edges"] = std::move(edges);
    json boundary = json::array();
    for (const auto& b : c.boundary_edges) boundary.push_back({{"patch", b.patch}, {"edge", std::string(to_string(b.edge))}});
    doc["boundary_edges"] = std::move(boundary);
    if (!c.geometry_coeffs.empty()) {
        json coords = json::array();
        for (const auto& g : c.geometry_coeffs) coords.push_back(vector_json(g));
        doc["geometry_coeffs"] = std::move(coords);
    }
    if (file.space) {
        json basis = json::array();
        for (Eigen::Index r = 0; r < file.space->basis.rows(); ++r)
            basis.push_back(vector_json(file.space->basis.row(r).transpose()));
        doc["space"] = {{"k", file.space->k}, {"residual", file.space->residual}, {"basis", std::move(basis)}};
    }
    if (!file.fields.empty()) {
        json fields = json::array();
        for (const auto& f : file.fields) fields.push_back({{"name", f.name}, {"coeffs", vector_json(f.coeffs)}});
        doc["fields"] = std::move(fields);
    }
    return doc.dump(1) + "\n";
}

ComplexFile parse_complex_file(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("complex file: invalid JSON: ") + e.what());
    }
    if (get<std::string>(doc, "format") != kComplexFileFormat) throw FormatError("complex file: wrong format tag");
    const int version = get<int>(doc, "version");
    if (version != kComplexFileVersion)
        throw FormatError("complex file: unsupported version " + std::to_string(version));

    ComplexFile f;
    PatchComplex& c = f.complex;
    c.n = get<int>(doc, "n");
    const auto bidegree = get<std::vector<int>>(doc, "bidegree");
    if (bidegree.size() != 2) throw FormatError("complex file: bidegree must have two entries");
    c.degree_u = bidegree[0];
    c.degree_v = bidegree[1];
    if (c.n < 1 || c.degree_u < 1 || c.degree_v < 1) throw FormatError("complex file: n and bidegree must be positive");

    for (const auto& e : member(doc, "edges")) c.edges.push_back(edge_from(e));
    if (doc.contains("boundary_edges")) {
        for (const auto& b : doc.at("boundary_edges")) c.boundary_edges.push_back({get<int>(b, "patch"), edge_id(b, "edge")});
    } else {
        c.boundary_edges = free_sides(c);
    }
    for (const auto& net : member(doc, "patches")) c.geometry.push_back(patch_from(net, c.degree_u, c.degree_v));
    if (!c.geometry.empty()) {
        if (static_cast<int>(c.geometry.size()) != c.n) throw FormatError("complex file: expected one net per patch");
        for (const auto& g : c.geometry)
            if (g.out_dim() != c.geometry.front().out_dim())
                throw FormatError("complex file: patch nets differ in dimension");
    }
    validate_complex(c, std::numeric_limits<double>::infinity());

    if (doc.contains("space")) {
        const json& s = doc.at("space");
        SpaceRecord rec;
        rec.k = get<int>(s, "k");
        rec.residual = get<double>(s, "residual");
        const json& rows = member(s, "basis");
        if (!rows.is_array() || static_cast<int>(rows.size()) != c.total_coeffs())
            throw FormatError("complex file: space basis needs one row per patch coefficient");
        const Eigen::Index dim = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
        rec.basis.resize(c.total_coeffs(), dim);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Eigen::VectorXd row = vector_from(rows[r], "basis row");
            if (row.size() != dim) throw FormatError("complex file: ragged space basis");
            rec.basis.row(static_cast<Eigen::Index>(r)) = row.transpose();
        }
        f.space = std::move(rec);
    }
    const Eigen::Index dim = f.space ? f.space->basis.cols() : -1;
    auto check_dim = [&](const Eigen::VectorXd& v, const std::string& what) {
        if (dim < 0) throw FormatError("complex file: " + what + " needs a stored space");
        if (v.size() != dim) throw FormatError("complex file: " + what + " does not match the space dimension");
    };
    if (doc.contains("geometry_coeffs"))
        for (const auto& g : doc.at("geometry_coeffs")) {
            c.geometry_coeffs.push_back(vector_from(g, "geometry_coeffs"));
            check_dim(c.geometry_coeffs.back(), "geometry_coeffs");
        }
    if (doc.contains("fields"))
        for (const auto& fe : doc.at("fields")) {
            FieldEntry entry{get<std::string>(fe, "name"), vector_from(member(fe, "coeffs"), "field coeffs")};
            check_dim(entry.coeffs, "field \"" + entry.name + "\"");
            f.fields.push_back(std::move(entry));
        }
    return f;
}

void write_complex_file(const std::filesystem::path& path, const ComplexFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out << serialize(file);
    if (!out) throw FormatError("failed writing " + path.string());
}

ComplexFile read_complex_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_complex_file(text.str());
}

} // namespace isogk
