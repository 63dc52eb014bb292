#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fvsolid/core.hpp"
#include "fvsolid/mesh.hpp"

namespace fvsolid {

/// Equivalent (von Mises) stress sqrt(3/2 s:s) of the deviatoric part s.
inline double vonMisesStress(const Tensor3& sigma) {
    const double p = sigma.trace() / 3.0;
    double ss = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double s = sigma.m[i][j] - (i == j ? p : 0.0);
            ss += s * s;
        }
    return std::sqrt(1.5 * ss);
}

/// Legacy ASCII VTK unstructured grid with polyhedron cells (type 42, face
/// streams), displacement and stress as CELL_DATA. Formatting is fixed so
/// repeated runs produce byte-identical files.
inline void writeLegacyVtk(const std::string& path, const PolyMesh& mesh,
                           const std::vector<Vec3>& displacement,
                           const std::vector<Tensor3>& stress,
                           const std::vector<double>& vonMises, const std::string& title) {
    std::ofstream out(path);
    if (!out) throw Error(path + ": cannot open output file");
    char buf[160];

    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";

    out << "POINTS " << mesh.points.size() << " double\n";
    for (const auto& p : mesh.points) {
        std::snprintf(buf, sizeof buf, "%.9e %.9e %.9e\n", p.x, p.y, p.z);
        out << buf;
    }

    const auto cellFaceIds = mesh.cellFaces();
    std::size_t totalInts = 0;
    for (int c = 0; c < mesh.cellCount; ++c) {
        std::size_t len = 1;  // face count slot
        for (int f : cellFaceIds[c]) len += 1 + mesh.faces[f].size();
        totalInts += 1 + len;
    }

    out << "CELLS " << mesh.cellCount << ' ' << totalInts << "\n";
    for (int c = 0; c < mesh.cellCount; ++c) {
        std::size_t len = 1;
        for (int f : cellFaceIds[c]) len += 1 + mesh.faces[f].size();
        out << len << ' ' << cellFaceIds[c].size();
        for (int f : cellFaceIds[c]) {
            out << ' ' << mesh.faces[f].size();
            for (int idx : mesh.faces[f]) out << ' ' << idx;
        }
        out << "\n";
    }

    out << "CELL_TYPES " << mesh.cellCount << "\n";
    for (int c = 0; c < mesh.cellCount; ++c) out << "42\n";

    out << "CELL_DATA " << mesh.cellCount << "\n";
    out << "VECTORS displacement double\n";
    for (const auto& u : displacement) {
        std::snprintf(buf, sizeof buf, "%.9e %.9e %.9e\n", u.x, u.y, u.z);
        out << buf;
    }
    out << "TENSORS stress double\n";
    for (const auto& s : stress) {
        for (int i = 0; i < 3; ++i) {
            std::snprintf(buf, sizeof buf, "%.9e %.9e %.9e\n", s.m[i][0], s.m[i][1], s.m[i][2]);
            out << buf;
        }
    }
    out << "SCALARS vonMises double 1\nLOOKUP_TABLE default\n";
    for (double v : vonMises) {
        std::snprintf(buf, sizeof buf, "%.9e\n", v);
        out << buf;
    }

    if (!out) throw Error(path + ": write failed");
}

}  // namespace fvsolid
