#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here is deliberately naive: dense solves, brute-force enumerations and
// divergence-theorem identities used to cross-check the library.

#include <array>
#include <random>
#include <vector>

#include "fvsolid/fvsolid.hpp"

namespace testsupport {

using namespace fvsolid;

/// Block mesh with interior points jittered by +-fraction of the local
/// spacing; boundary points stay put so the box shape is preserved.
inline PolyMesh perturbedBlockMesh(const Vec3& origin, const Vec3& extent,
                                   const std::array<int, 3>& divisions, double fraction,
                                   unsigned seed) {
    PolyMesh mesh = buildBlockMesh(origin, extent, divisions);
    std::vector<bool> boundaryPoint(mesh.points.size(), false);
    for (int f = mesh.internalFaceCount(); f < mesh.faceCount(); ++f)
        for (int idx : mesh.faces[f]) boundaryPoint[idx] = true;

    const Vec3 h{extent.x / divisions[0], extent.y / divisions[1], extent.z / divisions[2]};
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(-fraction, fraction);
    for (std::size_t p = 0; p < mesh.points.size(); ++p) {
        if (boundaryPoint[p]) continue;
        mesh.points[p].x += jitter(rng) * h.x;
        mesh.points[p].y += jitter(rng) * h.y;
        mesh.points[p].z += jitter(rng) * h.z;
    }
    return mesh;
}

/// Divergence-theorem volume: Omega = (1/3) sum_f x_f . Gamma_f (outward).
inline double divergenceVolume(const PolyMesh& mesh, const MeshGeometry& geom, int cell) {
    double v = 0.0;
    const auto cellFaces = mesh.cellFaces();
    for (int f : cellFaces[cell]) {
        const double sign = (mesh.owner[f] == cell) ? 1.0 : -1.0;
        v += sign * dot(geom.faceCentroid[f], geom.faceArea[f]);
    }
    return v / 3.0;
}

/// Dense Gaussian elimination with partial pivoting; the direct-solver
/// oracle for the iterative solver tests.
inline std::vector<double> denseSolve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[pivot][k])) pivot = i;
        std::swap(a[k], a[pivot]);
        std::swap(b[k], b[pivot]);
        for (int i = k + 1; i < n; ++i) {
            const double factor = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= factor * a[k][j];
            b[i] -= factor * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

inline std::vector<std::vector<double>> denseFromSparse(const SparseSymmetricMatrix& a) {
    std::vector<std::vector<double>> d(a.rowCount, std::vector<double>(a.rowCount, 0.0));
    for (int i = 0; i < a.rowCount; ++i) d[i][i] = a.diag[i];
    for (std::size_t e = 0; e < a.row.size(); ++e) {
        d[a.row[e]][a.col[e]] += a.value[e];
        d[a.col[e]][a.row[e]] += a.value[e];
    }
    return d;
}

/// Random diagonally dominant SPD matrix built as D + L + L^T.
inline SparseSymmetricMatrix randomSpd(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> offDist(-1.0, 1.0);
    std::uniform_real_distribution<double> diagPad(0.1, 2.0);
    std::vector<int> row, col;
    std::vector<double> value;
    std::vector<double> rowAbs(n, 0.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int entries = std::max(n, 2 * n);
    for (int e = 0; e < entries; ++e) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        const double v = offDist(rng);
        row.push_back(i);
        col.push_back(j);
        value.push_back(v);
        rowAbs[i] += std::abs(v);
        rowAbs[j] += std::abs(v);
    }
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = rowAbs[i] + diagPad(rng);
    return makeSparseSymmetric(n, std::move(diag), std::move(row), std::move(col), std::move(value));
}

inline Tensor3 makeTensor(const double (&rows)[3][3]) {
    Tensor3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t.m[i][j] = rows[i][j];
    return t;
}

/// Linear displacement field u = c + x . A over a mesh, boundary values
/// included; gradients of this field equal A exactly.
inline VectorField linearField(const PolyMesh& mesh, const MeshGeometry& geom, const Tensor3& a,
                               const Vec3& c) {
    VectorField u;
    u.cellValues.resize(mesh.cellCount);
    for (int i = 0; i < mesh.cellCount; ++i) u.cellValues[i] = c + dot(geom.cellCentroid[i], a);
    u.oldTime = u.cellValues;
    u.oldOldTime = u.cellValues;
    u.patchValues.resize(mesh.boundaryFaceCount());
    for (int f = mesh.internalFaceCount(); f < mesh.faceCount(); ++f)
        u.patchValues[f - mesh.internalFaceCount()] = c + dot(geom.faceCentroid[f], a);
    return u;
}

}  // namespace testsupport
