#pragma once

#include <array>
#include <string>
#include <vector>

#include "fvsolid/core.hpp"
#include "fvsolid/fields.hpp"
#include "fvsolid/geometry.hpp"
#include "fvsolid/material.hpp"
#include "fvsolid/mesh.hpp"

namespace fvsolid {

enum class GradientWeighting { unity, inverseDistance };

/// Per-cell body force acceleration. An empty field means zero everywhere.
struct BodyForceField {
    std::vector<Vec3> acceleration;
};

/// One scalar linear system per displacement component, sharing the
/// off-diagonal coefficients. The row equation is
///   diag[k][P] u_P - sum_f offDiag[f] u_N = rhs[P][k]
/// with offDiag > 0 on every internal face. The row-compressed structure
/// over the internal faces lives in CellAdjacency.
struct MomentumSystem {
    std::vector<double> offDiag;              // a_N, per internal face
    std::array<std::vector<double>, 3> diag;  // a_P, per component per cell
    std::vector<Vec3> rhs;                    // b_P
};

/// Row-compressed cell-to-cell adjacency derived from the internal faces.
struct CellAdjacency {
    std::vector<int> rowStart;  // cellCount + 1
    std::vector<int> cell;      // adjacent cell per entry
    std::vector<int> face;      // internal face per entry
};

inline CellAdjacency buildCellAdjacency(const PolyMesh& mesh) {
    CellAdjacency adj;
    adj.rowStart.assign(mesh.cellCount + 1, 0);
    for (int f = 0; f < mesh.internalFaceCount(); ++f) {
        ++adj.rowStart[mesh.owner[f] + 1];
        ++adj.rowStart[mesh.neighbour[f] + 1];
    }
    for (int c = 0; c < mesh.cellCount; ++c) adj.rowStart[c + 1] += adj.rowStart[c];
    adj.cell.resize(adj.rowStart.back());
    adj.face.resize(adj.rowStart.back());
    std::vector<int> fill(adj.rowStart.begin(), adj.rowStart.end() - 1);
    // Scanning faces in ascending order keeps every row's entries in the same
    // order the assembly accumulates them.
    for (int f = 0; f < mesh.internalFaceCount(); ++f) {
        const int o = mesh.owner[f], n = mesh.neighbour[f];
        adj.cell[fill[o]] = n;
        adj.face[fill[o]] = f;
        ++fill[o];
        adj.cell[fill[n]] = o;
        adj.face[fill[n]] = f;
        ++fill[n];
    }
    return adj;
}

// ---------------------------------------------------------------------------
// Least-squares cell gradients
// ---------------------------------------------------------------------------

namespace detail {

inline Tensor3 matMul(const Tensor3& a, const Tensor3& b) {
    Tensor3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
    return r;
}

/// Explicit inverse of a symmetric positive-definite 3x3 matrix; throws a
/// degenerate-stencil error when the matrix is (numerically) singular, i.e.
/// when all stencil directions are coplanar.
inline Tensor3 invertStencilMatrix(const Tensor3& m, int cell) {
    Tensor3 adjug;
    adjug.m[0][0] = m.m[1][1] * m.m[2][2] - m.m[1][2] * m.m[2][1];
    adjug.m[0][1] = m.m[0][2] * m.m[2][1] - m.m[0][1] * m.m[2][2];
    adjug.m[0][2] = m.m[0][1] * m.m[1][2] - m.m[0][2] * m.m[1][1];
    adjug.m[1][0] = m.m[1][2] * m.m[2][0] - m.m[1][0] * m.m[2][2];
    adjug.m[1][1] = m.m[0][0] * m.m[2][2] - m.m[0][2] * m.m[2][0];
    adjug.m[1][2] = m.m[0][2] * m.m[1][0] - m.m[0][0] * m.m[1][2];
    adjug.m[2][0] = m.m[1][0] * m.m[2][1] - m.m[1][1] * m.m[2][0];
    adjug.m[2][1] = m.m[0][1] * m.m[2][0] - m.m[0][0] * m.m[2][1];
    adjug.m[2][2] = m.m[0][0] * m.m[1][1] - m.m[0][1] * m.m[1][0];
    const double det =
        m.m[0][0] * adjug.m[0][0] + m.m[0][1] * adjug.m[1][0] + m.m[0][2] * adjug.m[2][0];
    const double scale = maxAbs(m);
    if (!(det > 1e-20 * scale * scale * scale))
        throw DegenerateStencilError("degenerate gradient stencil at cell " + std::to_string(cell) +
                                     ": all directions coplanar");
    return adjug * (1.0 / det);
}

inline double lsWeightSquared(GradientWeighting w, const Vec3& d) {
    if (w == GradientWeighting::unity) return 1.0;
    const double m2 = dot(d, d);
    return 1.0 / m2;
}

}  // namespace detail

/// Inverted least-squares normal matrices, one per cell. They depend only on
/// the geometry and the weighting, so a solver builds them once per mesh.
struct LeastSquaresStencil {
    GradientWeighting weighting = GradientWeighting::inverseDistance;
    std::vector<Tensor3> inverseNormal;
};

inline LeastSquaresStencil buildLeastSquaresStencil(const PolyMesh& mesh, const MeshGeometry& geom,
                                                    GradientWeighting weighting) {
    LeastSquaresStencil st;
    st.weighting = weighting;
    std::vector<Tensor3> normal(mesh.cellCount);
    for (int f = 0; f < mesh.faceCount(); ++f) {
        const Vec3& d = geom.delta[f];
        const Tensor3 ddT = detail::lsWeightSquared(weighting, d) * outer(d, d);
        normal[mesh.owner[f]] += ddT;
        if (mesh.isInternalFace(f)) normal[mesh.neighbour[f]] += ddT;
    }
    st.inverseNormal.resize(mesh.cellCount);
    for (int c = 0; c < mesh.cellCount; ++c)
        st.inverseNormal[c] = detail::invertStencilMatrix(normal[c], c);
    return st;
}

/// Weighted least-squares displacement gradient at each cell centre:
///   (grad u)_P = [sum w^2 d d]^-1 . sum [w^2 d (u_f - u_P)]
/// The stencil runs over all faces of the cell; boundary faces contribute
/// with d = x_f - x_P and the boundary face value, which keeps the fit
/// full-rank and linearly exact next to boundaries.
inline std::vector<Tensor3> leastSquaresGradient(const VectorField& u, const PolyMesh& mesh,
                                                 const MeshGeometry& geom,
                                                 const LeastSquaresStencil& stencil) {
    std::vector<Tensor3> moment(mesh.cellCount);
    const int nInternal = mesh.internalFaceCount();
    for (int f = 0; f < mesh.faceCount(); ++f) {
        const int o = mesh.owner[f];
        const Vec3& d = geom.delta[f];
        const double w2 = detail::lsWeightSquared(stencil.weighting, d);
        if (f < nInternal) {
            const int n = mesh.neighbour[f];
            // The same rank-one term serves both sides: flipping d and the
            // difference together leaves the outer product unchanged.
            const Tensor3 contrib = w2 * outer(d, u.cellValues[n] - u.cellValues[o]);
            moment[o] += contrib;
            moment[n] += contrib;
        } else {
            moment[o] += w2 * outer(d, u.patchValues[f - nInternal] - u.cellValues[o]);
        }
    }
    std::vector<Tensor3> grad(mesh.cellCount);
    for (int c = 0; c < mesh.cellCount; ++c)
        grad[c] = detail::matMul(stencil.inverseNormal[c], moment[c]);
    return grad;
}

inline std::vector<Tensor3> leastSquaresGradient(const VectorField& u, const PolyMesh& mesh,
                                                 const MeshGeometry& geom,
                                                 GradientWeighting weighting) {
    return leastSquaresGradient(u, mesh, geom, buildLeastSquaresStencil(mesh, geom, weighting));
}

/// Inverse-distance weighted mean of the adjacent cell gradients:
///   (grad u)_f = gamma (grad u)_P + (1 - gamma) (grad u)_N
inline std::vector<Tensor3> interpolateFaceGradient(const std::vector<Tensor3>& cellGrads,
                                                    const PolyMesh& mesh,
                                                    const MeshGeometry& geom) {
    std::vector<Tensor3> faceGrad(mesh.internalFaceCount());
    for (int f = 0; f < mesh.internalFaceCount(); ++f) {
        const double g = geom.gamma[f];
        faceGrad[f] = g * cellGrads[mesh.owner[f]] + (1.0 - g) * cellGrads[mesh.neighbour[f]];
    }
    return faceGrad;
}

// ---------------------------------------------------------------------------
// Boundary handling
// ---------------------------------------------------------------------------

/// Refreshes the boundary face displacement values from the latest interior
/// state. Traction faces extrapolate u_b = u_P + d . (grad u)_P; symmetry
/// faces additionally drop the normal component.
inline void updateBoundaryDisplacement(VectorField& u, const std::vector<Tensor3>& cellGrads,
                                       const PolyMesh& mesh, const MeshGeometry& geom,
                                       const BoundaryConditions& bcs) {
    const int nInternal = mesh.internalFaceCount();
    for (int f = nInternal; f < mesh.faceCount(); ++f) {
        const int bf = f - nInternal;
        const int o = mesh.owner[f];
        switch (bcs.faceKind[bf]) {
            case PatchKind::fixedDisplacement:
                u.patchValues[bf] = bcs.faceValue[bf];
                break;
            case PatchKind::traction:
                u.patchValues[bf] = u.cellValues[o] + dot(geom.delta[f], cellGrads[o]);
                break;
            case PatchKind::symmetry: {
                const Vec3 n = unit(geom.faceArea[f]);
                const Vec3 v = u.cellValues[o] + dot(geom.delta[f], cellGrads[o]);
                u.patchValues[bf] = v - n * dot(v, n);
                break;
            }
        }
    }
}

/// Boundary-face displacement gradients. Faces with a known displacement
/// (fixed or symmetry) get the normal-corrected one-sided reconstruction
///   (grad u)_b = (grad u)_P + dhat ((u_b - u_P)/|d| - dhat . (grad u)_P)
/// so the along-d derivative matches the compact difference exactly;
/// traction faces keep the cell gradient.
inline void reconstructBoundaryGradients(TensorField& grads, const VectorField& u,
                                         const PolyMesh& mesh, const MeshGeometry& geom,
                                         const BoundaryConditions& bcs) {
    const int nInternal = mesh.internalFaceCount();
    for (int f = nInternal; f < mesh.faceCount(); ++f) {
        const int bf = f - nInternal;
        const int o = mesh.owner[f];
        if (bcs.faceKind[bf] == PatchKind::traction) {
            grads.boundaryFace[bf] = grads.cell[o];
            continue;
        }
        const Vec3& d = geom.delta[f];
        const double dm = mag(d);
        const Vec3 dhat = d / dm;
        const Vec3 correction = (u.patchValues[bf] - u.cellValues[o]) / dm - dot(dhat, grads.cell[o]);
        grads.boundaryFace[bf] = grads.cell[o] + outer(dhat, correction);
    }
}

// ---------------------------------------------------------------------------
// Explicit force terms
// ---------------------------------------------------------------------------

/// Face-summed surface force per cell:
///   sum_f faceArea . [mu grad u + mu (grad u)^T + lambda tr(grad u) I]_f
/// Internal contributions are computed once per face and added to the owner
/// and subtracted from the neighbour, so the pairwise cancellation is exact.
/// Boundary faces use the reconstructed boundary gradient; on traction faces
/// the applied traction directly replaces the stress expression, and on
/// symmetry faces only the normal traction component acts.
inline std::vector<Vec3> explicitSurfaceForce(const TensorField& grads,
                                              const LinearElasticMaterial& material,
                                              const PolyMesh& mesh, const MeshGeometry& geom,
                                              const BoundaryConditions& bcs) {
    std::vector<Vec3> force(mesh.cellCount);
    const int nInternal = mesh.internalFaceCount();
    for (int f = 0; f < nInternal; ++f) {
        const Vec3 t = dot(geom.faceArea[f], stressFromGradient(grads.internalFace[f], material));
        force[mesh.owner[f]] += t;
        force[mesh.neighbour[f]] -= t;
    }
    for (int f = nInternal; f < mesh.faceCount(); ++f) {
        const int bf = f - nInternal;
        Vec3 t;
        switch (bcs.faceKind[bf]) {
            case PatchKind::fixedDisplacement:
                t = dot(geom.faceArea[f], stressFromGradient(grads.boundaryFace[bf], material));
                break;
            case PatchKind::traction:
                t = bcs.faceValue[bf] * mag(geom.faceArea[f]);
                break;
            case PatchKind::symmetry: {
                const Vec3 n = unit(geom.faceArea[f]);
                const Tensor3 sigma = stressFromGradient(grads.boundaryFace[bf], material);
                t = n * (dot(n, dot(sigma, n)) * mag(geom.faceArea[f]));
                break;
            }
        }
        force[mesh.owner[f]] += t;
    }
    return force;
}

/// Third-order face diffusion that damps chequerboard modes: per internal
/// face
///   K [ |ortho| (u_N - u_P)/|d| + nonOrtho . (grad u)_f ] - faceArea .
///   [ K (grad u)_f ]
/// with K = 2 mu + lambda. The term is the difference between two estimates
/// of the face-normal displacement gradient and vanishes on exactly linear
/// fields. Boundary faces carry no stabilization.
inline std::vector<Vec3> stabilizationTerm(const VectorField& u, const TensorField& grads,
                                           const LinearElasticMaterial& material,
                                           const PolyMesh& mesh, const MeshGeometry& geom) {
    std::vector<Vec3> force(mesh.cellCount);
    const double stiffness = material.implicitStiffness();
    for (int f = 0; f < mesh.internalFaceCount(); ++f) {
        const int o = mesh.owner[f], n = mesh.neighbour[f];
        const Vec3 compact =
            (mag(geom.orthoComponent[f]) / mag(geom.delta[f])) * (u.cellValues[n] - u.cellValues[o]);
        const Vec3 gradPart =
            dot(geom.nonOrthoComponent[f] - geom.faceArea[f], grads.internalFace[f]);
        const Vec3 t = stiffness * (compact + gradPart);
        force[o] += t;
        force[n] -= t;
    }
    return force;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

/// Adds the boundary contributions to an assembled system and fills the
/// boundary-face gradients.
///
/// fixedDisplacement faces contribute an implicit coefficient
/// a_b = K |ortho|/|d| to the diagonal, a_b u_b to the source, and the
/// explicit correction K (nonOrtho - faceArea) . (grad u)_b; with the
/// normal-corrected boundary gradient the implicit pair cancels at
/// convergence against the correction, leaving the full surface force.
/// Symmetry faces apply the same coefficient projected onto the face normal
/// (the normal displacement component is fixed at zero), with the matching
/// explicit compensation. Traction faces are fully explicit.
inline void applyBoundaryConditions(MomentumSystem& sys, const VectorField& u,
                                    const LinearElasticMaterial& material, const PolyMesh& mesh,
                                    const MeshGeometry& geom, const BoundaryConditions& bcs,
                                    TensorField& grads, bool steady) {
    if (steady && !bcs.hasConstrainingFace())
        throw SingularSystemError(
            "steady problem has no fixedDisplacement or symmetry patch; the system is singular");

    reconstructBoundaryGradients(grads, u, mesh, geom, bcs);

    const double stiffness = material.implicitStiffness();
    const int nInternal = mesh.internalFaceCount();
    for (int f = nInternal; f < mesh.faceCount(); ++f) {
        const int bf = f - nInternal;
        const int o = mesh.owner[f];
        if (bcs.faceKind[bf] == PatchKind::traction) continue;
        const double ab = stiffness * mag(geom.orthoComponent[f]) / mag(geom.delta[f]);
        if (bcs.faceKind[bf] == PatchKind::fixedDisplacement) {
            for (int k = 0; k < 3; ++k) sys.diag[k][o] += ab;
            sys.rhs[o] += ab * u.patchValues[bf] +
                          stiffness * dot(geom.nonOrthoComponent[f] - geom.faceArea[f],
                                          grads.boundaryFace[bf]);
        } else {  // symmetry
            const Vec3 n = unit(geom.faceArea[f]);
            for (int k = 0; k < 3; ++k) {
                const double proj = ab * n[k] * n[k];
                sys.diag[k][o] += proj;
                sys.rhs[o][k] += proj * u.cellValues[o][k];
            }
        }
    }
}

/// Assembles the segregated momentum system for one outer iteration. The
/// central coefficient of the face diffusion term and the temporal term are
/// implicit; everything else enters the source evaluated at the latest
/// displacement field. Gradients must have been refreshed for this
/// iteration (cell and internal-face parts); the boundary-face part is
/// filled here.
inline MomentumSystem assembleMomentum(const VectorField& u, const LinearElasticMaterial& material,
                                       const PolyMesh& mesh, const MeshGeometry& geom,
                                       const BoundaryConditions& bcs,
                                       const BodyForceField& bodyForce, const TimeState& timeState,
                                       TensorField& grads) {
    if (!bodyForce.acceleration.empty() &&
        static_cast<int>(bodyForce.acceleration.size()) != mesh.cellCount)
        throw InvalidArgumentError("body force field length does not match cell count");

    MomentumSystem sys;
    const int nInternal = mesh.internalFaceCount();
    const double stiffness = material.implicitStiffness();

    sys.offDiag.resize(nInternal);
    for (int k = 0; k < 3; ++k) sys.diag[k].assign(mesh.cellCount, 0.0);
    sys.rhs.assign(mesh.cellCount, Vec3{});

    for (int f = 0; f < nInternal; ++f) {
        const double aN = stiffness * mag(geom.orthoComponent[f]) / mag(geom.delta[f]);
        sys.offDiag[f] = aN;
        for (int k = 0; k < 3; ++k) {
            sys.diag[k][mesh.owner[f]] += aN;
            sys.diag[k][mesh.neighbour[f]] += aN;
        }
    }

    if (!timeState.steady) {
        if (!(timeState.dt > 0.0))
            throw InvalidArgumentError("time-step size must be positive for dynamic problems");
        const double invDt2 = 1.0 / (timeState.dt * timeState.dt);
        for (int c = 0; c < mesh.cellCount; ++c) {
            const double inertia = material.density * geom.cellVolume[c] * invDt2;
            for (int k = 0; k < 3; ++k) sys.diag[k][c] += inertia;
            sys.rhs[c] += inertia * (2.0 * u.oldTime[c] - u.oldOldTime[c]);
        }
    }

    if (!bodyForce.acceleration.empty())
        for (int c = 0; c < mesh.cellCount; ++c)
            sys.rhs[c] += material.density * geom.cellVolume[c] * bodyForce.acceleration[c];

    const auto surface = explicitSurfaceForce(grads, material, mesh, geom, bcs);
    for (int c = 0; c < mesh.cellCount; ++c) sys.rhs[c] += surface[c];

    // Explicit part of the face diffusion; its compact part is the implicit
    // offDiag coefficient above.
    for (int f = 0; f < nInternal; ++f) {
        const Vec3 t = stiffness *
                       dot(geom.nonOrthoComponent[f] - geom.faceArea[f], grads.internalFace[f]);
        sys.rhs[mesh.owner[f]] += t;
        sys.rhs[mesh.neighbour[f]] -= t;
    }

    applyBoundaryConditions(sys, u, material, mesh, geom, bcs, grads, timeState.steady);
    return sys;
}

// ---------------------------------------------------------------------------
// System diagnostics
// ---------------------------------------------------------------------------

/// Asserts the structural properties of an assembled system: a_N > 0 on
/// every internal face and per-row diagonal dominance in every component.
/// Violations throw; tolerances are zero by design.
inline void checkMatrixProperties(const MomentumSystem& sys, const CellAdjacency& adj,
                                  const PolyMesh& mesh) {
    for (int f = 0; f < mesh.internalFaceCount(); ++f)
        if (!(sys.offDiag[f] > 0.0))
            throw Error("matrix property violation: a_N <= 0 at internal face " + std::to_string(f));
    for (int c = 0; c < mesh.cellCount; ++c) {
        double sum = 0.0;
        for (int e = adj.rowStart[c]; e < adj.rowStart[c + 1]; ++e) sum += sys.offDiag[adj.face[e]];
        for (int k = 0; k < 3; ++k)
            if (!(sys.diag[k][c] >= sum))
                throw Error("matrix property violation: row " + std::to_string(c) +
                            " component " + std::to_string(k) + " not diagonally dominant");
    }
}

/// Row residuals b_P - (a_P u_P - sum a_N u_N) of the assembled system at
/// the given displacement field.
inline std::vector<Vec3> momentumRowResiduals(const MomentumSystem& sys, const CellAdjacency& adj,
                                              const VectorField& u) {
    const int nCells = static_cast<int>(sys.rhs.size());
    std::vector<Vec3> res(nCells);
    for (int c = 0; c < nCells; ++c) {
        Vec3 neighbourSum;
        for (int e = adj.rowStart[c]; e < adj.rowStart[c + 1]; ++e)
            neighbourSum += sys.offDiag[adj.face[e]] * u.cellValues[adj.cell[e]];
        for (int k = 0; k < 3; ++k)
            res[c][k] = sys.rhs[c][k] - (sys.diag[k][c] * u.cellValues[c][k] - neighbourSum[k]);
    }
    return res;
}

/// Scale-free residual per component:
///   r_k = sum_P |b - (a_P u_P - sum a_N u_N)|_k / max(sum_P (|a_P u_P| + |b|)_k, 1e-300)
inline std::array<double, 3> momentumResidual(const MomentumSystem& sys, const CellAdjacency& adj,
                                              const VectorField& u) {
    const auto rows = momentumRowResiduals(sys, adj, u);
    std::array<double, 3> num{0.0, 0.0, 0.0};
    std::array<double, 3> den{0.0, 0.0, 0.0};
    const int nCells = static_cast<int>(sys.rhs.size());
    for (int c = 0; c < nCells; ++c) {
        for (int k = 0; k < 3; ++k) {
            num[k] += std::abs(rows[c][k]);
            den[k] += std::abs(sys.diag[k][c] * u.cellValues[c][k]) + std::abs(sys.rhs[c][k]);
        }
    }
    std::array<double, 3> r{};
    for (int k = 0; k < 3; ++k) r[k] = num[k] / std::max(den[k], 1e-300);
    return r;
}

/// Boundary face forces consistent with the assembled discretisation,
/// evaluated at the current field: the traction load, or the reconstructed
/// surface force on fixed and symmetry faces. At convergence these are the
/// reaction forces.
inline std::vector<Vec3> boundaryFaceForces(const TensorField& grads,
                                            const LinearElasticMaterial& material,
                                            const PolyMesh& mesh, const MeshGeometry& geom,
                                            const BoundaryConditions& bcs) {
    const int nInternal = mesh.internalFaceCount();
    std::vector<Vec3> forces(mesh.boundaryFaceCount());
    for (int f = nInternal; f < mesh.faceCount(); ++f) {
        const int bf = f - nInternal;
        switch (bcs.faceKind[bf]) {
            case PatchKind::fixedDisplacement:
                forces[bf] =
                    dot(geom.faceArea[f], stressFromGradient(grads.boundaryFace[bf], material));
                break;
            case PatchKind::traction:
                forces[bf] = bcs.faceValue[bf] * mag(geom.faceArea[f]);
                break;
            case PatchKind::symmetry: {
                const Vec3 n = unit(geom.faceArea[f]);
                const Tensor3 sigma = stressFromGradient(grads.boundaryFace[bf], material);
                forces[bf] = n * (dot(n, dot(sigma, n)) * mag(geom.faceArea[f]));
                break;
            }
        }
    }
    return forces;
}

}  // namespace fvsolid
