#pragma once

#include <string>
#include <vector>

#include "fvsolid/core.hpp"
#include "fvsolid/mesh.hpp"

namespace fvsolid {

/// Derived face and cell metrics consumed by the discretisation.
///
/// faceArea is the area vector of each face, oriented owner -> neighbour for
/// internal faces and outward on boundary faces. delta joins the owner cell
/// centre to the neighbour cell centre (internal) or to the face centroid
/// (boundary). orthoComponent/nonOrthoComponent hold the split
///   faceArea = ortho + nonOrtho,   ortho = delta |faceArea|^2 / (delta . faceArea)
/// with ortho parallel to delta; the split feeds the implicit central
/// coefficient and the explicit non-orthogonality correction.
struct MeshGeometry {
    std::vector<Vec3> faceArea;
    std::vector<Vec3> faceCentroid;
    std::vector<Vec3> cellCentroid;
    std::vector<double> cellVolume;
    std::vector<Vec3> delta;
    std::vector<double> gamma;  // internal faces only
    std::vector<Vec3> orthoComponent;
    std::vector<Vec3> nonOrthoComponent;
};

namespace detail {

struct FaceMetric {
    Vec3 area;
    Vec3 centroid;
};

// Triangle-fan metric about an area-weighted centre. Two passes: the fan
// centre is first estimated as the vertex mean, then recomputed as the
// area-weighted mean of the fan triangle centroids. Exact for planar faces,
// well-behaved for mildly warped ones.
inline FaceMetric faceMetric(const std::vector<Vec3>& points, const std::vector<int>& face) {
    const int n = static_cast<int>(face.size());
    Vec3 mean;
    for (int idx : face) mean += points[idx];
    mean = mean / n;

    Vec3 areaSum;
    Vec3 weightedCentre;
    double magSum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec3& a = points[face[i]];
        const Vec3& b = points[face[(i + 1) % n]];
        const Vec3 triArea = 0.5 * cross(a - mean, b - mean);
        const Vec3 triCentroid = (mean + a + b) / 3.0;
        const double m = mag(triArea);
        areaSum += triArea;
        weightedCentre += m * triCentroid;
        magSum += m;
    }

    FaceMetric fm;
    fm.area = areaSum;
    fm.centroid = magSum > 0.0 ? weightedCentre / magSum : mean;
    return fm;
}

struct CellMetric {
    double volume;
    Vec3 centroid;
};

// Tetrahedral decomposition: each face fan triangle forms a signed
// tetrahedron with the approximate cell centre.
inline CellMetric cellMetric(const std::vector<Vec3>& points, const PolyMesh& mesh,
                             const std::vector<FaceMetric>& faceMetrics,
                             const std::vector<int>& cellFaceIds, int cell) {
    Vec3 approx;
    for (int f : cellFaceIds) approx += faceMetrics[f].centroid;
    approx = approx / static_cast<double>(cellFaceIds.size());

    double volume = 0.0;
    Vec3 weighted;
    for (int f : cellFaceIds) {
        const auto& face = mesh.faces[f];
        const double sign = (mesh.owner[f] == cell) ? 1.0 : -1.0;
        const Vec3& fc = faceMetrics[f].centroid;
        const int n = static_cast<int>(face.size());
        for (int i = 0; i < n; ++i) {
            const Vec3 a = points[face[i]] - approx;
            const Vec3 b = points[face[(i + 1) % n]] - approx;
            const Vec3 c = fc - approx;
            // Tet (approx, a, b, c); outward winding gives positive volume.
            const double v = sign * dot(cross(a, b), c) / 6.0;
            const Vec3 tc = approx + (a + b + c) * 0.25;
            volume += v;
            weighted += v * tc;
        }
    }

    CellMetric cm;
    cm.volume = volume;
    cm.centroid = volume != 0.0 ? weighted / volume : approx;
    return cm;
}

}  // namespace detail

/// Computes all MeshGeometry fields. With strict=true, a non-positive cell
/// volume raises a degenerate-cell error and delta . faceArea <= 0 raises an
/// inverted-face error; with strict=false the offending quantities are left
/// as computed (ortho falls back to the full area vector) so that
/// validateMesh can report them.
inline MeshGeometry computeGeometry(const PolyMesh& mesh, bool strict = true) {
    MeshGeometry g;
    const int nFaces = mesh.faceCount();
    const int nInternal = mesh.internalFaceCount();

    std::vector<detail::FaceMetric> fm(nFaces);
    for (int f = 0; f < nFaces; ++f) fm[f] = detail::faceMetric(mesh.points, mesh.faces[f]);

    g.faceArea.resize(nFaces);
    g.faceCentroid.resize(nFaces);
    for (int f = 0; f < nFaces; ++f) {
        g.faceArea[f] = fm[f].area;
        g.faceCentroid[f] = fm[f].centroid;
    }

    const auto cellFaceIds = mesh.cellFaces();
    g.cellCentroid.resize(mesh.cellCount);
    g.cellVolume.resize(mesh.cellCount);
    for (int c = 0; c < mesh.cellCount; ++c) {
        const auto cm = detail::cellMetric(mesh.points, mesh, fm, cellFaceIds[c], c);
        if (strict && !(cm.volume > 0.0))
            throw MeshError("degenerate cell " + std::to_string(c) +
                            ": non-positive volume " + std::to_string(cm.volume));
        g.cellVolume[c] = cm.volume;
        g.cellCentroid[c] = cm.centroid;
    }

    g.delta.resize(nFaces);
    g.gamma.resize(nInternal);
    g.orthoComponent.resize(nFaces);
    g.nonOrthoComponent.resize(nFaces);
    for (int f = 0; f < nFaces; ++f) {
        const Vec3& xp = g.cellCentroid[mesh.owner[f]];
        if (f < nInternal) {
            const Vec3& xn = g.cellCentroid[mesh.neighbour[f]];
            g.delta[f] = xn - xp;
            const double toFace = mag(g.faceCentroid[f] - xp);
            const double fromFace = mag(xn - g.faceCentroid[f]);
            g.gamma[f] = fromFace / (toFace + fromFace);
        } else {
            g.delta[f] = g.faceCentroid[f] - xp;
        }

        const double dGamma = dot(g.delta[f], g.faceArea[f]);
        if (dGamma > 0.0) {
            g.orthoComponent[f] = g.delta[f] * (dot(g.faceArea[f], g.faceArea[f]) / dGamma);
        } else {
            if (strict)
                throw MeshError("inverted face " + std::to_string(f) +
                                ": delta . faceArea = " + std::to_string(dGamma));
            g.orthoComponent[f] = g.faceArea[f];
        }
        g.nonOrthoComponent[f] = g.faceArea[f] - g.orthoComponent[f];
    }

    return g;
}

// ---------------------------------------------------------------------------
// Mesh validation
// ---------------------------------------------------------------------------

enum class IssueCode {
    pointIndexOutOfRange,
    cellIndexOutOfRange,
    faceOrdering,        // internal faces must precede boundary faces / owner < neighbour
    patchCoverage,
    tooFewCellFaces,
    openCell,            // face areas of a cell do not sum to zero
    nonPositiveVolume,
    invalidGamma,
    splitMismatch,       // ortho not parallel to delta, or ortho + nonOrtho != faceArea
    invertedFace,
    zeroAreaFace,
};

struct ValidationIssue {
    IssueCode code;
    int index;  // face, cell, or patch index depending on the code
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool clean() const { return issues.empty(); }
    bool has(IssueCode code) const {
        for (const auto& i : issues)
            if (i.code == code) return true;
        return false;
    }
    bool has(IssueCode code, int index) const {
        for (const auto& i : issues)
            if (i.code == code && i.index == index) return true;
        return false;
    }
};

/// Checks every PolyMesh and MeshGeometry invariant; an empty report means
/// the mesh is accepted by the solver. Violations are report entries, never
/// exceptions.
inline ValidationReport validateMesh(const PolyMesh& mesh, const MeshGeometry& g) {
    ValidationReport rep;
    const auto add = [&rep](IssueCode code, int index, std::string msg) {
        rep.issues.push_back({code, index, std::move(msg)});
    };

    const int nFaces = mesh.faceCount();
    const int nInternal = mesh.internalFaceCount();
    const int nPoints = static_cast<int>(mesh.points.size());

    if (static_cast<int>(mesh.owner.size()) != nFaces)
        add(IssueCode::faceOrdering, -1, "owner list length does not match face count");
    if (nInternal > nFaces)
        add(IssueCode::faceOrdering, -1, "neighbour list longer than face list");

    for (int f = 0; f < nFaces; ++f) {
        for (int idx : mesh.faces[f]) {
            if (idx < 0 || idx >= nPoints) {
                add(IssueCode::pointIndexOutOfRange, f,
                    "face " + std::to_string(f) + " references point " + std::to_string(idx));
                break;
            }
        }
        if (mesh.faces[f].size() < 3)
            add(IssueCode::zeroAreaFace, f, "face " + std::to_string(f) + " has fewer than 3 points");
    }

    for (int f = 0; f < static_cast<int>(mesh.owner.size()); ++f)
        if (mesh.owner[f] < 0 || mesh.owner[f] >= mesh.cellCount)
            add(IssueCode::cellIndexOutOfRange, f, "owner of face " + std::to_string(f) + " out of range");
    for (int f = 0; f < nInternal; ++f) {
        if (mesh.neighbour[f] < 0 || mesh.neighbour[f] >= mesh.cellCount)
            add(IssueCode::cellIndexOutOfRange, f, "neighbour of face " + std::to_string(f) + " out of range");
        else if (!(mesh.owner[f] < mesh.neighbour[f]))
            add(IssueCode::faceOrdering, f,
                "internal face " + std::to_string(f) + " must have owner < neighbour");
    }

    // Patch ranges: contiguous, disjoint, covering exactly the boundary faces.
    {
        int expected = nInternal;
        for (int p = 0; p < static_cast<int>(mesh.patches.size()); ++p) {
            const auto& patch = mesh.patches[p];
            if (patch.startFace != expected)
                add(IssueCode::patchCoverage, p,
                    "patch " + patch.name + " starts at face " + std::to_string(patch.startFace) +
                        ", expected " + std::to_string(expected));
            if (patch.faceCount < 1)
                add(IssueCode::patchCoverage, p, "patch " + patch.name + " has no faces");
            expected = patch.startFace + patch.faceCount;
        }
        if (expected != nFaces)
            add(IssueCode::patchCoverage, -1, "patches do not cover all boundary faces");
    }

    const auto cellFaceIds = mesh.cellFaces();
    for (int c = 0; c < mesh.cellCount; ++c)
        if (cellFaceIds[c].size() < 4)
            add(IssueCode::tooFewCellFaces, c, "cell " + std::to_string(c) + " has fewer than 4 faces");

    // Geometry invariants.
    if (static_cast<int>(g.faceArea.size()) == nFaces &&
        static_cast<int>(g.cellVolume.size()) == mesh.cellCount) {
        for (int c = 0; c < mesh.cellCount; ++c) {
            Vec3 sum;
            double total = 0.0;
            for (int f : cellFaceIds[c]) {
                const double sign = (mesh.owner[f] == c) ? 1.0 : -1.0;
                sum += sign * g.faceArea[f];
                total += mag(g.faceArea[f]);
            }
            if (mag(sum) > 1e-10 * total)
                add(IssueCode::openCell, c,
                    "cell " + std::to_string(c) + " is not closed: |sum faceArea| = " +
                        std::to_string(mag(sum)));
            if (!(g.cellVolume[c] > 0.0))
                add(IssueCode::nonPositiveVolume, c,
                    "cell " + std::to_string(c) + " has non-positive volume");
        }

        for (int f = 0; f < nFaces; ++f) {
            if (mag(g.faceArea[f]) < 1e-14)
                add(IssueCode::zeroAreaFace, f, "face " + std::to_string(f) + " has zero area");
            if (dot(g.delta[f], g.faceArea[f]) <= 0.0)
                add(IssueCode::invertedFace, f,
                    "face " + std::to_string(f) + " is inverted: delta . faceArea <= 0");
            const double crossMag = mag(cross(g.orthoComponent[f], g.delta[f]));
            if (crossMag > 1e-12 * mag(g.orthoComponent[f]) * mag(g.delta[f]))
                add(IssueCode::splitMismatch, f,
                    "face " + std::to_string(f) + ": ortho component not parallel to delta");
            const Vec3 complement = g.faceArea[f] - g.orthoComponent[f];
            if (!(complement == g.nonOrthoComponent[f]))
                add(IssueCode::splitMismatch, f,
                    "face " + std::to_string(f) + ": nonOrtho != faceArea - ortho");
        }
        for (int f = 0; f < nInternal && f < static_cast<int>(g.gamma.size()); ++f)
            if (!(g.gamma[f] > 0.0 && g.gamma[f] < 1.0))
                add(IssueCode::invalidGamma, f,
                    "face " + std::to_string(f) + ": gamma = " + std::to_string(g.gamma[f]) +
                        " outside (0,1)");
    }

    return rep;
}

}  // namespace fvsolid
