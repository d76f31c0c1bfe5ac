#pragma once

#include "isogk/gsmooth_space.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isogk {

inline constexpr int kComplexFileVersion = 1;
inline constexpr std::string_view kComplexFileFormat = "isogk-complex";

struct FieldEntry {
    std::string name;
    /// Coordinates in the basis of the stored space.
    Eigen::VectorXd coeffs;

    bool operator==(const FieldEntry&) const = default;
};

/// The nullspace basis a file's coefficient vectors refer to.
struct SpaceRecord {
    int k = 1;
    double residual = 0.0;
    Eigen::MatrixXd basis;

    bool operator==(const SpaceRecord&) const = default;
};

/// A patch complex on disk. The geometry nets in complex.geometry are the
/// authoritative control points; geometry_coeffs and fields need a space.
struct ComplexFile {
    PatchComplex complex;
    std::optional<SpaceRecord> space;
    std::vector<FieldEntry> fields;

    bool operator==(const ComplexFile&) const = default;
};

ComplexFile make_complex_file(const GSmoothSpace& space);

/// The stored space with the file's complex; throws FormatError without one.
GSmoothSpace space_of(const ComplexFile& file);

const FieldEntry& find_field(const ComplexFile& file, std::string_view name);

/// Pretty-printed JSON; doubles use the shortest decimal form that parses
/// back to the same bits.
std::string serialize(const ComplexFile& file);

/// Throws FormatError on malformed JSON, a wrong format tag or an unknown
/// version, and ContractError when the complex itself is inconsistent.
/// G0 agreement of the geometry is not checked here; that is check's job.
ComplexFile parse_complex_file(std::string_view text);

void write_complex_file(const std::filesystem::path& path, const ComplexFile& file);
ComplexFile read_complex_file(const std::filesystem::path& path);

} // namespace isogk
