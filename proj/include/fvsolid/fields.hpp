#pragma once

#include <string>
#include <vector>

#include "fvsolid/core.hpp"
#include "fvsolid/mesh.hpp"

namespace fvsolid {

/// Cell-centred vector field with explicit per-boundary-face values and the
/// two prior time levels needed by the acceleration stencil.
struct VectorField {
    std::vector<Vec3> cellValues;
    std::vector<Vec3> patchValues;  // indexed by (face - internalFaceCount)
    std::vector<Vec3> oldTime;      // step m-1
    std::vector<Vec3> oldOldTime;   // step m-2
};

/// Displacement-gradient tensors at cell centres, internal face centres and
/// boundary face centres.
struct TensorField {
    std::vector<Tensor3> cell;
    std::vector<Tensor3> internalFace;
    std::vector<Tensor3> boundaryFace;

    void resize(const PolyMesh& mesh) {
        cell.assign(mesh.cellCount, Tensor3{});
        internalFace.assign(mesh.internalFaceCount(), Tensor3{});
        boundaryFace.assign(mesh.boundaryFaceCount(), Tensor3{});
    }
};

struct TimeState {
    double dt = 0.0;
    int stepIndex = 0;
    double currentTime = 0.0;
    bool steady = true;
};

/// Per-patch boundary condition: a fixed boundary displacement, an applied
/// traction, or a symmetry plane (no value).
struct BoundaryConditionSpec {
    std::string patch;
    PatchKind kind = PatchKind::fixedDisplacement;
    Vec3 value;
};

/// Per-boundary-face expansion consumed by the discretisation. Patch-level
/// specs are uniform; the per-face form also lets verification cases apply
/// face-varying boundary displacements or tractions directly.
struct BoundaryConditions {
    std::vector<PatchKind> faceKind;
    std::vector<Vec3> faceValue;

    bool hasConstrainingFace() const {
        for (const auto k : faceKind)
            if (k == PatchKind::fixedDisplacement || k == PatchKind::symmetry) return true;
        return false;
    }
};

inline BoundaryConditions expandBoundaryConditions(const PolyMesh& mesh,
                                                   const std::vector<BoundaryConditionSpec>& specs) {
    BoundaryConditions bcs;
    bcs.faceKind.assign(mesh.boundaryFaceCount(), PatchKind::fixedDisplacement);
    bcs.faceValue.assign(mesh.boundaryFaceCount(), Vec3{});

    std::vector<bool> covered(mesh.patches.size(), false);
    for (const auto& spec : specs) {
        int patchIdx = -1;
        for (int p = 0; p < static_cast<int>(mesh.patches.size()); ++p)
            if (mesh.patches[p].name == spec.patch) patchIdx = p;
        if (patchIdx < 0)
            throw InvalidArgumentError("boundary condition references unknown patch '" + spec.patch + "'");
        covered[patchIdx] = true;
        const auto& patch = mesh.patches[patchIdx];
        for (int f = patch.startFace; f < patch.startFace + patch.faceCount; ++f) {
            bcs.faceKind[f - mesh.internalFaceCount()] = spec.kind;
            bcs.faceValue[f - mesh.internalFaceCount()] = spec.value;
        }
    }
    for (std::size_t p = 0; p < covered.size(); ++p)
        if (!covered[p])
            throw InvalidArgumentError("no boundary condition given for patch '" +
                                       mesh.patches[p].name + "'");
    return bcs;
}

/// Uniform initial field. All time levels start from the initial value;
/// fixedDisplacement faces take their boundary value immediately.
inline VectorField initialiseField(const PolyMesh& mesh, const Vec3& initial,
                                   const BoundaryConditions* bcs = nullptr) {
    VectorField u;
    u.cellValues.assign(mesh.cellCount, initial);
    u.oldTime.assign(mesh.cellCount, initial);
    u.oldOldTime.assign(mesh.cellCount, initial);
    u.patchValues.assign(mesh.boundaryFaceCount(), initial);
    if (bcs != nullptr) {
        for (int bf = 0; bf < mesh.boundaryFaceCount(); ++bf)
            if (bcs->faceKind[bf] == PatchKind::fixedDisplacement)
                u.patchValues[bf] = bcs->faceValue[bf];
    }
    return u;
}

/// Shifts the time levels after a converged step: oldOld <- old, old <-
/// current. Values are only relabelled, never mixed.
inline void advanceTime(VectorField& u, TimeState& state) {
    u.oldOldTime = u.oldTime;
    u.oldTime = u.cellValues;
    state.stepIndex += 1;
    state.currentTime += state.dt;
}

}  // namespace fvsolid
