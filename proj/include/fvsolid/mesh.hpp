#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fvsolid/core.hpp"

namespace fvsolid {

enum class PatchKind { fixedDisplacement, traction, symmetry };

inline const char* toString(PatchKind k) {
    switch (k) {
        case PatchKind::fixedDisplacement: return "fixedDisplacement";
        case PatchKind::traction: return "traction";
        case PatchKind::symmetry: return "symmetry";
    }
    return "?";
}

inline std::optional<PatchKind> patchKindFromString(std::string_view s) {
    if (s == "fixedDisplacement") return PatchKind::fixedDisplacement;
    if (s == "traction") return PatchKind::traction;
    if (s == "symmetry") return PatchKind::symmetry;
    return std::nullopt;
}

struct BoundaryPatch {
    std::string name;
    int startFace = 0;
    int faceCount = 0;
    PatchKind kind = PatchKind::fixedDisplacement;
};

/// Face-addressed unstructured polyhedral mesh. Faces are ordered lists of
/// point indices wound so the face normal points out of the owner cell.
/// Internal faces come first; each has owner < neighbour. Boundary faces
/// follow, grouped into contiguous patches.
struct PolyMesh {
    std::vector<Vec3> points;
    std::vector<std::vector<int>> faces;
    std::vector<int> owner;      // one entry per face
    std::vector<int> neighbour;  // one entry per internal face
    std::vector<BoundaryPatch> patches;
    int cellCount = 0;

    int faceCount() const { return static_cast<int>(faces.size()); }
    int internalFaceCount() const { return static_cast<int>(neighbour.size()); }
    int boundaryFaceCount() const { return faceCount() - internalFaceCount(); }
    bool isInternalFace(int f) const { return f < internalFaceCount(); }

    int patchOfFace(int face) const {
        for (int p = 0; p < static_cast<int>(patches.size()); ++p) {
            if (face >= patches[p].startFace && face < patches[p].startFace + patches[p].faceCount)
                return p;
        }
        return -1;
    }

    /// Per-cell face lists, derived from owner/neighbour.
    std::vector<std::vector<int>> cellFaces() const {
        std::vector<std::vector<int>> cf(cellCount);
        for (int f = 0; f < faceCount(); ++f) cf[owner[f]].push_back(f);
        for (int f = 0; f < internalFaceCount(); ++f) cf[neighbour[f]].push_back(f);
        return cf;
    }
};

/// Structured hexahedral mesh covering an axis-aligned box. Boundary patches
/// are named minX/maxX/minY/maxY/minZ/maxZ; their kinds default to
/// fixedDisplacement and are normally re-typed by the case setup.
inline PolyMesh buildBlockMesh(const Vec3& origin, const Vec3& extent,
                               const std::array<int, 3>& divisions) {
    for (int d = 0; d < 3; ++d) {
        if (!(extent[d] > 0.0))
            throw InvalidArgumentError("buildBlockMesh: extent must be positive in every direction");
        if (divisions[d] < 1)
            throw InvalidArgumentError("buildBlockMesh: divisions must be >= 1 in every direction");
    }
    const int nx = divisions[0], ny = divisions[1], nz = divisions[2];

    PolyMesh mesh;
    mesh.cellCount = nx * ny * nz;

    const auto pointId = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
    const auto cellId = [&](int i, int j, int k) { return i + nx * (j + ny * k); };

    mesh.points.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1) * (nz + 1)));
    for (int k = 0; k <= nz; ++k)
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i)
                mesh.points.push_back({origin.x + extent.x * i / nx,
                                       origin.y + extent.y * j / ny,
                                       origin.z + extent.z * k / nz});

    // Internal faces, emitted in ascending owner order; each owner emits its
    // +x, +y, +z faces so owner < neighbour throughout.
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int c = cellId(i, j, k);
                if (i + 1 < nx) {
                    mesh.faces.push_back({pointId(i + 1, j, k), pointId(i + 1, j + 1, k),
                                          pointId(i + 1, j + 1, k + 1), pointId(i + 1, j, k + 1)});
                    mesh.owner.push_back(c);
                    mesh.neighbour.push_back(cellId(i + 1, j, k));
                }
                if (j + 1 < ny) {
                    mesh.faces.push_back({pointId(i, j + 1, k), pointId(i, j + 1, k + 1),
                                          pointId(i + 1, j + 1, k + 1), pointId(i + 1, j + 1, k)});
                    mesh.owner.push_back(c);
                    mesh.neighbour.push_back(cellId(i, j + 1, k));
                }
                if (k + 1 < nz) {
                    mesh.faces.push_back({pointId(i, j, k + 1), pointId(i + 1, j, k + 1),
                                          pointId(i + 1, j + 1, k + 1), pointId(i, j + 1, k + 1)});
                    mesh.owner.push_back(c);
                    mesh.neighbour.push_back(cellId(i, j, k + 1));
                }
            }

    const auto startPatch = [&](const std::string& name) {
        BoundaryPatch p;
        p.name = name;
        p.startFace = mesh.faceCount();
        p.kind = PatchKind::fixedDisplacement;
        return p;
    };
    const auto finishPatch = [&](BoundaryPatch p) {
        p.faceCount = mesh.faceCount() - p.startFace;
        mesh.patches.push_back(std::move(p));
    };

    {
        auto p = startPatch("minX");
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j) {
                mesh.faces.push_back({pointId(0, j, k), pointId(0, j, k + 1),
                                      pointId(0, j + 1, k + 1), pointId(0, j + 1, k)});
                mesh.owner.push_back(cellId(0, j, k));
            }
        finishPatch(p);
    }
    {
        auto p = startPatch("maxX");
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j) {
                mesh.faces.push_back({pointId(nx, j, k), pointId(nx, j + 1, k),
                                      pointId(nx, j + 1, k + 1), pointId(nx, j, k + 1)});
                mesh.owner.push_back(cellId(nx - 1, j, k));
            }
        finishPatch(p);
    }
    {
        auto p = startPatch("minY");
        for (int k = 0; k < nz; ++k)
            for (int i = 0; i < nx; ++i) {
                mesh.faces.push_back({pointId(i, 0, k), pointId(i + 1, 0, k),
                                      pointId(i + 1, 0, k + 1), pointId(i, 0, k + 1)});
                mesh.owner.push_back(cellId(i, 0, k));
            }
        finishPatch(p);
    }
    {
        auto p = startPatch("maxY");
        for (int k = 0; k < nz; ++k)
            for (int i = 0; i < nx; ++i) {
                mesh.faces.push_back({pointId(i, ny, k), pointId(i, ny, k + 1),
                                      pointId(i + 1, ny, k + 1), pointId(i + 1, ny, k)});
                mesh.owner.push_back(cellId(i, ny - 1, k));
            }
        finishPatch(p);
    }
    {
        auto p = startPatch("minZ");
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                mesh.faces.push_back({pointId(i, j, 0), pointId(i, j + 1, 0),
                                      pointId(i + 1, j + 1, 0), pointId(i + 1, j, 0)});
                mesh.owner.push_back(cellId(i, j, 0));
            }
        finishPatch(p);
    }
    {
        auto p = startPatch("maxZ");
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                mesh.faces.push_back({pointId(i, j, nz), pointId(i + 1, j, nz),
                                      pointId(i + 1, j + 1, nz), pointId(i, j + 1, nz)});
                mesh.owner.push_back(cellId(i, j, nz - 1));
            }
        finishPatch(p);
    }

    return mesh;
}

}  // namespace fvsolid
