#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fvsolid/config.hpp"
#include "fvsolid/core.hpp"
#include "fvsolid/discretisation.hpp"
#include "fvsolid/solver.hpp"
#include "fvsolid/vtk.hpp"

namespace fvsolid {

struct CaseResult {
    VectorField displacement;
    std::vector<ConvergenceRecord> steps;
    int fieldWrites = 0;
};

namespace detail {

inline void appendResidualRows(std::ofstream& log, int step, const ConvergenceRecord& rec) {
    for (std::size_t i = 0; i < rec.outer.size(); ++i) {
        const auto& it = rec.outer[i];
        log << step << ' ' << (i + 1) << ' ' << formatSci(it.residual[0]) << ' '
            << formatSci(it.residual[1]) << ' ' << formatSci(it.residual[2]) << ' '
            << it.innerIterations[0] << ' ' << it.innerIterations[1] << ' '
            << it.innerIterations[2] << "\n";
    }
    log.flush();
}

inline void writeStepOutput(const std::string& resultsDir, int step, const PolyMesh& mesh,
                            const MeshGeometry& geom, const VectorField& u,
                            const LinearElasticMaterial& material,
                            const BoundaryConditions& bcs, GradientWeighting weighting) {
    // Post-processing stress from the converged least-squares cell gradients.
    VectorField state = u;
    TensorField grads;
    grads.resize(mesh);
    const auto stencil = buildLeastSquaresStencil(mesh, geom, weighting);
    grads.cell = leastSquaresGradient(state, mesh, geom, stencil);
    updateBoundaryDisplacement(state, grads.cell, mesh, geom, bcs);
    grads.cell = leastSquaresGradient(state, mesh, geom, stencil);

    std::vector<Tensor3> stress(mesh.cellCount);
    std::vector<double> vm(mesh.cellCount);
    for (int c = 0; c < mesh.cellCount; ++c) {
        stress[c] = stressFromGradient(grads.cell[c], material);
        vm[c] = vonMisesStress(stress[c]);
    }
    writeLegacyVtk(resultsDir + "/step_" + std::to_string(step) + ".vtk", mesh,
                   state.cellValues, stress, vm, "fvsolid step " + std::to_string(step));
}

}  // namespace detail

/// Runs a configured case against a loaded mesh. Steady mode performs one
/// equilibrium solve; dynamic mode marches to endTime writing fields every
/// writeInterval steps. Outputs go to <outputDir>/results: step_<n>.vtk and
/// residuals.log. A failed step preserves the outputs written so far and
/// leaves a FAILED marker next to them.
inline CaseResult runCase(const CaseConfig& cfg, const PolyMesh& mesh, const MeshGeometry& geom,
                          const std::string& outputDir) {
    const BoundaryConditions bcs = expandBoundaryConditions(mesh, cfg.boundaries);
    BodyForceField bodyForce;
    bodyForce.acceleration.assign(mesh.cellCount, cfg.bodyForce);

    const std::string resultsDir = outputDir + "/results";
    std::filesystem::create_directories(resultsDir);
    std::ofstream log(resultsDir + "/residuals.log");
    if (!log) throw Error(resultsDir + "/residuals.log: cannot open for writing");
    log << "# step outerIter resX resY resZ innerItersX innerItersY innerItersZ\n";

    CaseResult result;
    result.displacement = initialiseField(mesh, Vec3{}, &bcs);

    TimeState state;
    state.steady = cfg.steady;
    state.dt = cfg.dt;

    const int totalSteps = cfg.steady ? 1 : static_cast<int>(std::llround(cfg.endTime / cfg.dt));

    for (int step = 1; step <= totalSteps; ++step) {
        ConvergenceRecord rec;
        try {
            rec = solveTimeStep(result.displacement, cfg.material, mesh, geom, bcs, bodyForce,
                                state, cfg.controls);
        } catch (const StepFailureError& failure) {
            detail::appendResidualRows(log, step, failure.record);
            std::ofstream marker(resultsDir + "/FAILED");
            marker << "step " << step << ": " << failure.what() << "\n";
            throw;
        }
        detail::appendResidualRows(log, step, rec);
        result.steps.push_back(rec);
        logInfo("step " + std::to_string(step) + " converged in " +
                std::to_string(rec.outerIterations()) + " outer iterations");

        if (cfg.steady) {
            detail::writeStepOutput(resultsDir, step, mesh, geom, result.displacement,
                                    cfg.material, bcs, cfg.controls.gradientWeighting);
            ++result.fieldWrites;
        } else {
            advanceTime(result.displacement, state);
            if (state.stepIndex % cfg.writeInterval == 0) {
                detail::writeStepOutput(resultsDir, state.stepIndex, mesh, geom,
                                        result.displacement, cfg.material, bcs,
                                        cfg.controls.gradientWeighting);
                ++result.fieldWrites;
            }
        }
    }

    return result;
}

}  // namespace fvsolid
