#pragma once

#include <array>
#include <string>
#include <vector>

#include "fvsolid/core.hpp"
#include "fvsolid/discretisation.hpp"
#include "fvsolid/fields.hpp"
#include "fvsolid/geometry.hpp"
#include "fvsolid/linsolve.hpp"
#include "fvsolid/material.hpp"
#include "fvsolid/mesh.hpp"

namespace fvsolid {

struct SolverControls {
    double outerTolerance = 1e-6;
    int maxOuterIterations = 1000;
    double innerRelTol = 0.1;  // one order of magnitude per inner solve
    int innerMaxIterations = 1000;
    double relaxationFactor = 0.95;  // alpha in (0, 1]
    Preconditioner preconditioner = Preconditioner::incompleteCholesky;
    GradientWeighting gradientWeighting = GradientWeighting::inverseDistance;
    bool assertMatrixProperties = false;  // validate every assembled system

    void validate() const {
        if (!(relaxationFactor > 0.0 && relaxationFactor <= 1.0))
            throw InvalidArgumentError("relaxation factor must lie in (0, 1]");
        if (!(outerTolerance > 0.0) || !(innerRelTol > 0.0))
            throw InvalidArgumentError("solver tolerances must be positive");
        if (maxOuterIterations < 1 || innerMaxIterations < 1)
            throw InvalidArgumentError("iteration limits must be at least 1");
    }
};

struct OuterIterationRecord {
    std::array<double, 3> residual{};
    std::array<int, 3> innerIterations{};
};

struct ConvergenceRecord {
    std::vector<OuterIterationRecord> outer;
    bool converged = false;
    int outerIterations() const { return static_cast<int>(outer.size()); }
};

struct StepFailureError : Error {
    ConvergenceRecord record;
    StepFailureError(const std::string& msg, ConvergenceRecord rec)
        : Error(msg), record(std::move(rec)) {}
};

namespace detail {

inline SparseSymmetricMatrix componentMatrix(const MomentumSystem& sys, const PolyMesh& mesh,
                                             int component) {
    const int nInternal = mesh.internalFaceCount();
    std::vector<int> row(nInternal), col(nInternal);
    std::vector<double> value(nInternal);
    for (int f = 0; f < nInternal; ++f) {
        row[f] = mesh.owner[f];
        col[f] = mesh.neighbour[f];
        value[f] = -sys.offDiag[f];
    }
    return makeSparseSymmetric(mesh.cellCount, sys.diag[component], std::move(row), std::move(col),
                               std::move(value));
}

}  // namespace detail

/// Segregated solution of one time step (one equilibrium solve when steady).
///
/// Each outer Picard iteration refreshes the boundary values and the cell
/// and face gradients from the latest displacement field, assembles the
/// momentum system, solves the three Cartesian component systems in x, y, z
/// order with preconditioned CG, under-relaxes the field, and evaluates the
/// scale-free residual; iterations stop once the largest component residual
/// drops below the outer tolerance. Throws a step failure carrying the
/// convergence record if the limit is reached first.
inline ConvergenceRecord solveTimeStep(VectorField& u, const LinearElasticMaterial& material,
                                       const PolyMesh& mesh, const MeshGeometry& geom,
                                       const BoundaryConditions& bcs,
                                       const BodyForceField& bodyForce, const TimeState& timeState,
                                       const SolverControls& controls) {
    controls.validate();
    const auto stencil = buildLeastSquaresStencil(mesh, geom, controls.gradientWeighting);
    const auto adjacency = buildCellAdjacency(mesh);

    TensorField grads;
    grads.resize(mesh);
    grads.cell = leastSquaresGradient(u, mesh, geom, stencil);

    ConvergenceRecord record;
    std::vector<double> xs(mesh.cellCount), bs(mesh.cellCount);

    for (int iter = 1; iter <= controls.maxOuterIterations; ++iter) {
        updateBoundaryDisplacement(u, grads.cell, mesh, geom, bcs);
        grads.cell = leastSquaresGradient(u, mesh, geom, stencil);
        grads.internalFace = interpolateFaceGradient(grads.cell, mesh, geom);

        MomentumSystem sys =
            assembleMomentum(u, material, mesh, geom, bcs, bodyForce, timeState, grads);
        if (controls.assertMatrixProperties) checkMatrixProperties(sys, adjacency, mesh);

        OuterIterationRecord outRec;
        const std::vector<Vec3> previous = u.cellValues;
        for (int k = 0; k < 3; ++k) {
            const SparseSymmetricMatrix a = detail::componentMatrix(sys, mesh, k);
            for (int c = 0; c < mesh.cellCount; ++c) {
                xs[c] = previous[c][k];
                bs[c] = sys.rhs[c][k];
            }
            const SolveStats stats =
                cgSolve(a, bs, xs, controls.innerRelTol, controls.innerMaxIterations,
                        controls.preconditioner);
            outRec.innerIterations[k] = stats.iterations;
            const double alpha = controls.relaxationFactor;
            for (int c = 0; c < mesh.cellCount; ++c)
                u.cellValues[c][k] = previous[c][k] + alpha * (xs[c] - previous[c][k]);
        }

        outRec.residual = momentumResidual(sys, adjacency, u);
        record.outer.push_back(outRec);

        const double worst =
            std::max(outRec.residual[0], std::max(outRec.residual[1], outRec.residual[2]));
        if (logEnabled(LogLevel::debug))
            logDebug("  outer " + std::to_string(iter) + ": res " + formatSci(outRec.residual[0]) +
                     " " + formatSci(outRec.residual[1]) + " " + formatSci(outRec.residual[2]));
        if (worst <= controls.outerTolerance) {
            record.converged = true;
            return record;
        }
    }

    throw StepFailureError("time step failed to converge within " +
                               std::to_string(controls.maxOuterIterations) + " outer iterations",
                           record);
}

/// Global force balance at the converged state of a steady solve: the sum of
/// boundary reactions and applied loads against the total body force.
struct EquilibriumReport {
    Vec3 boundarySum;
    Vec3 bodySum;
    double boundaryAbsSum = 0.0;
};

inline EquilibriumReport globalEquilibrium(const VectorField& uConverged,
                                           const LinearElasticMaterial& material,
                                           const PolyMesh& mesh, const MeshGeometry& geom,
                                           const BoundaryConditions& bcs,
                                           const BodyForceField& bodyForce,
                                           GradientWeighting weighting) {
    VectorField u = uConverged;
    TensorField grads;
    grads.resize(mesh);
    const auto stencil = buildLeastSquaresStencil(mesh, geom, weighting);
    grads.cell = leastSquaresGradient(u, mesh, geom, stencil);
    updateBoundaryDisplacement(u, grads.cell, mesh, geom, bcs);
    grads.cell = leastSquaresGradient(u, mesh, geom, stencil);
    reconstructBoundaryGradients(grads, u, mesh, geom, bcs);

    EquilibriumReport rep;
    const auto forces = boundaryFaceForces(grads, material, mesh, geom, bcs);
    for (const auto& f : forces) {
        rep.boundarySum += f;
        rep.boundaryAbsSum += mag(f);
    }
    if (!bodyForce.acceleration.empty())
        for (int c = 0; c < mesh.cellCount; ++c)
            rep.bodySum += material.density * geom.cellVolume[c] * bodyForce.acceleration[c];
    return rep;
}

}  // namespace fvsolid
