// fvsolid command-line front end: case runs, mesh generation, mesh/config
// checking and manufactured-solution convergence studies.

#include <CLI11.hpp>

#include <array>
#include <iostream>
#include <string>
#include <vector>

#include "fvsolid/fvsolid.hpp"

namespace {

int checkCase(const std::string& caseDir, bool print, fvsolid::CaseConfig* outCfg,
              fvsolid::PolyMesh* outMesh, fvsolid::MeshGeometry* outGeom) {
    using namespace fvsolid;
    CaseConfig cfg;
    try {
        cfg = parseCaseConfig(caseDir + "/case.cfg");
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    PolyMesh mesh;
    try {
        mesh = loadCaseMesh(cfg);
    } catch (const Error& e) {
        std::cerr << "mesh error: " << e.what() << "\n";
        return 1;
    }

    const MeshGeometry geom = computeGeometry(mesh, /*strict=*/false);
    const ValidationReport report = validateMesh(mesh, geom);
    if (!report.clean()) {
        std::cerr << "mesh validation failed with " << report.issues.size() << " issue(s):\n";
        for (const auto& issue : report.issues) std::cerr << "  " << issue.message << "\n";
        return 1;
    }

    try {
        expandBoundaryConditions(mesh, cfg.boundaries);
    } catch (const Error& e) {
        std::cerr << "boundary condition error: " << e.what() << "\n";
        return 1;
    }

    if (print)
        std::cout << "case ok: " << mesh.cellCount << " cells, " << mesh.faceCount() << " faces ("
                  << mesh.internalFaceCount() << " internal), " << mesh.patches.size()
                  << " patches\n";
    if (outCfg) *outCfg = cfg;
    if (outMesh) *outMesh = std::move(mesh);
    if (outGeom) *outGeom = geom;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace fvsolid;

    CLI::App app{"fvsolid: cell-centred finite volume solver for small-strain linear elasticity"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    std::string runDir;
    auto* runCmd = app.add_subcommand("run", "solve the case in the given directory");
    runCmd->add_option("dir", runDir, "case directory containing case.cfg")->required();

    // --- check -------------------------------------------------------------
    std::string checkDir;
    auto* checkCmd = app.add_subcommand("check", "validate a case's config and mesh");
    checkCmd->add_option("dir", checkDir, "case directory containing case.cfg")->required();

    // --- mesh block --------------------------------------------------------
    auto* meshCmd = app.add_subcommand("mesh", "mesh utilities");
    meshCmd->require_subcommand(1);
    auto* blockCmd = meshCmd->add_subcommand("block", "generate an axis-aligned block mesh");
    std::vector<double> origin{0.0, 0.0, 0.0};
    std::vector<double> extent;
    std::vector<int> divisions;
    std::string outPath;
    blockCmd->add_option("--origin", origin, "box origin (3 values)")->expected(3);
    blockCmd->add_option("--extent", extent, "box extent (3 values)")->expected(3)->required();
    blockCmd->add_option("--divisions", divisions, "cell counts (3 values)")->expected(3)->required();
    blockCmd->add_option("--out", outPath, "output mesh file")->required();

    // --- mms ---------------------------------------------------------------
    auto* mmsCmd = app.add_subcommand("mms", "manufactured-solution convergence study");
    std::string solutionName;
    std::vector<int> sizes;
    double threshold = 1.9;
    double mmsTolerance = 1e-9;
    mmsCmd->add_option("--solution", solutionName, "catalogue entry (affine, quadratic, sines)")
        ->required();
    mmsCmd->add_option("--sizes", sizes, "mesh sizes n for n^3 cells")->required()->expected(-1);
    mmsCmd->add_option("--threshold", threshold, "minimum final pairwise order to pass");
    mmsCmd->add_option("--tolerance", mmsTolerance, "outer solver tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*runCmd) {
            CaseConfig cfg;
            PolyMesh mesh;
            MeshGeometry geom;
            const int rc = checkCase(runDir, false, &cfg, &mesh, &geom);
            if (rc != 0) return rc;
            runCase(cfg, mesh, geom, runDir);
            logInfo("outputs written to " + runDir + "/results");
            return 0;
        }
        if (*checkCmd) return checkCase(checkDir, true, nullptr, nullptr, nullptr);
        if (*blockCmd) {
            const PolyMesh mesh =
                buildBlockMesh({origin[0], origin[1], origin[2]}, {extent[0], extent[1], extent[2]},
                               {divisions[0], divisions[1], divisions[2]});
            writeMesh(mesh, outPath);
            logInfo("wrote " + outPath + ": " + std::to_string(mesh.cellCount) + " cells, " +
                    std::to_string(mesh.faceCount()) + " faces");
            return 0;
        }
        if (*mmsCmd) {
            const auto solution = ManufacturedSolution::byName(solutionName);
            const auto material = LinearElasticMaterial::fromYoungPoisson(2.6, 0.3, 1.0);
            SolverControls controls;
            controls.outerTolerance = mmsTolerance;
            controls.maxOuterIterations = 5000;
            const MmsStudyResult study = runMmsStudy(solution, material, sizes, controls, threshold);
            std::cout << study.table;
            return study.pass ? 0 : 1;
        }
    } catch (const StepFailureError& e) {
        std::cerr << "step failure: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
