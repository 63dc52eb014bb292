#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fvsolid/core.hpp"
#include "fvsolid/discretisation.hpp"
#include "fvsolid/fields.hpp"
#include "fvsolid/geometry.hpp"
#include "fvsolid/material.hpp"
#include "fvsolid/mesh.hpp"
#include "fvsolid/solver.hpp"

namespace fvsolid {

/// A closed-form displacement field together with its gradient and the
/// divergence of the resulting stress. The catalogue entries drive
/// manufactured-solution runs: the body force -(1/rho) div sigma(u*) makes
/// u* the exact solution of the momentum equation.
struct ManufacturedSolution {
    std::string name;
    std::function<Vec3(const Vec3&)> displacement;
    std::function<Tensor3(const Vec3&)> gradient;
    std::function<Vec3(const Vec3&, const LinearElasticMaterial&)> stressDivergence;

    /// u = c + x . A (gradient exactly A); div sigma = 0.
    static ManufacturedSolution affine(const Tensor3& a, const Vec3& c) {
        ManufacturedSolution s;
        s.name = "affine";
        s.displacement = [a, c](const Vec3& x) { return c + dot(x, a); };
        s.gradient = [a](const Vec3&) { return a; };
        s.stressDivergence = [](const Vec3&, const LinearElasticMaterial&) { return Vec3{}; };
        return s;
    }

    /// u_j = x . Q_j x + b_j . x + c_j with symmetric Q_j; div sigma is the
    /// constant 2 mu tr(Q_j) + 2 (mu + lambda) sum_i (Q_i)_ij.
    static ManufacturedSolution quadratic(const std::array<Tensor3, 3>& q, const Tensor3& b,
                                          const Vec3& c) {
        ManufacturedSolution s;
        s.name = "quadratic";
        s.displacement = [q, b, c](const Vec3& x) {
            Vec3 u = c + dot(x, b);
            for (int j = 0; j < 3; ++j) u[j] += dot(x, dot(q[j], x));
            return u;
        };
        s.gradient = [q, b](const Vec3& x) {
            Tensor3 g = b;
            for (int j = 0; j < 3; ++j) {
                const Vec3 qx = dot(q[j], x);
                for (int i = 0; i < 3; ++i) g.m[i][j] += 2.0 * qx[i];
            }
            return g;
        };
        s.stressDivergence = [q](const Vec3&, const LinearElasticMaterial& mat) {
            Vec3 div;
            for (int j = 0; j < 3; ++j) {
                double coupled = 0.0;
                for (int i = 0; i < 3; ++i) coupled += q[i].m[i][j];
                div[j] = 2.0 * mat.shearModulus * q[j].trace() +
                         2.0 * (mat.shearModulus + mat.lameLambda) * coupled;
            }
            return div;
        };
        return s;
    }

    /// u = (ax sin(pi x) sin(pi y), ay sin(pi y) sin(pi z), az sin(pi z) sin(pi x)).
    static ManufacturedSolution sines(const Vec3& amp) {
        ManufacturedSolution s;
        s.name = "sines";
        const double pi = 3.14159265358979323846;
        s.displacement = [amp, pi](const Vec3& x) {
            return Vec3{amp.x * std::sin(pi * x.x) * std::sin(pi * x.y),
                        amp.y * std::sin(pi * x.y) * std::sin(pi * x.z),
                        amp.z * std::sin(pi * x.z) * std::sin(pi * x.x)};
        };
        s.gradient = [amp, pi](const Vec3& x) {
            Tensor3 g;
            g.m[0][0] = amp.x * pi * std::cos(pi * x.x) * std::sin(pi * x.y);
            g.m[1][0] = amp.x * pi * std::sin(pi * x.x) * std::cos(pi * x.y);
            g.m[1][1] = amp.y * pi * std::cos(pi * x.y) * std::sin(pi * x.z);
            g.m[2][1] = amp.y * pi * std::sin(pi * x.y) * std::cos(pi * x.z);
            g.m[2][2] = amp.z * pi * std::cos(pi * x.z) * std::sin(pi * x.x);
            g.m[0][2] = amp.z * pi * std::sin(pi * x.z) * std::cos(pi * x.x);
            return g;
        };
        s.stressDivergence = [amp, pi](const Vec3& x, const LinearElasticMaterial& mat) {
            const double mu = mat.shearModulus;
            const double ml = mat.shearModulus + mat.lameLambda;
            const double p2 = pi * pi;
            const Vec3 u{amp.x * std::sin(pi * x.x) * std::sin(pi * x.y),
                         amp.y * std::sin(pi * x.y) * std::sin(pi * x.z),
                         amp.z * std::sin(pi * x.z) * std::sin(pi * x.x)};
            // gradient of div u
            const Vec3 gradDiv{
                -amp.x * p2 * std::sin(pi * x.x) * std::sin(pi * x.y) +
                    amp.z * p2 * std::cos(pi * x.z) * std::cos(pi * x.x),
                amp.x * p2 * std::cos(pi * x.x) * std::cos(pi * x.y) -
                    amp.y * p2 * std::sin(pi * x.y) * std::sin(pi * x.z),
                amp.y * p2 * std::cos(pi * x.y) * std::cos(pi * x.z) -
                    amp.z * p2 * std::sin(pi * x.z) * std::sin(pi * x.x)};
            return mu * (-2.0 * p2) * u + ml * gradDiv;
        };
        return s;
    }

    static const std::vector<std::string>& catalogueNames() {
        static const std::vector<std::string> names{"affine", "quadratic", "sines"};
        return names;
    }

    /// Catalogue entry with its built-in coefficients.
    static ManufacturedSolution byName(const std::string& name) {
        if (name == "affine") {
            Tensor3 a;
            a.m[0][0] = 0.10; a.m[0][1] = 0.02; a.m[0][2] = -0.03;
            a.m[1][0] = 0.04; a.m[1][1] = -0.05; a.m[1][2] = 0.06;
            a.m[2][0] = 0.01; a.m[2][1] = 0.03; a.m[2][2] = 0.08;
            return affine(a, Vec3{0.001, -0.002, 0.003});
        }
        if (name == "quadratic") {
            std::array<Tensor3, 3> q;
            const double qx[3][3] = {{0.50, 0.15, 0.10}, {0.15, -0.20, 0.05}, {0.10, 0.05, 0.30}};
            const double qy[3][3] = {{-0.25, 0.10, 0.05}, {0.10, 0.40, 0.15}, {0.05, 0.15, -0.10}};
            const double qz[3][3] = {{0.20, 0.05, 0.15}, {0.05, -0.30, 0.10}, {0.15, 0.10, 0.25}};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    q[0].m[i][j] = qx[i][j];
                    q[1].m[i][j] = qy[i][j];
                    q[2].m[i][j] = qz[i][j];
                }
            Tensor3 b;
            b.m[0][0] = 0.05; b.m[1][1] = -0.04; b.m[2][2] = 0.03;
            b.m[0][1] = 0.02; b.m[1][2] = 0.01; b.m[2][0] = -0.02;
            return quadratic(q, b, Vec3{0.01, 0.02, -0.01});
        }
        if (name == "sines") return sines(Vec3{1.0, 0.8, 0.6});
        std::string msg = "unknown manufactured solution '" + name + "'; catalogue:";
        for (const auto& n : catalogueNames()) msg += " " + n;
        throw InvalidArgumentError(msg);
    }
};

/// Body force and boundary displacements that make the manufactured field
/// the exact solution. Cell values are sampled at centroids (midpoint rule),
/// boundary values at boundary face centroids.
struct MmsCase {
    BodyForceField bodyForce;
    std::vector<Vec3> boundaryDisplacement;  // per boundary face
};

inline MmsCase mmsBodyForce(const ManufacturedSolution& solution,
                            const LinearElasticMaterial& material, const PolyMesh& mesh,
                            const MeshGeometry& geom) {
    MmsCase mms;
    mms.bodyForce.acceleration.resize(mesh.cellCount);
    for (int c = 0; c < mesh.cellCount; ++c)
        mms.bodyForce.acceleration[c] =
            (-1.0 / material.density) * solution.stressDivergence(geom.cellCentroid[c], material);
    mms.boundaryDisplacement.resize(mesh.boundaryFaceCount());
    const int nInternal = mesh.internalFaceCount();
    for (int f = nInternal; f < mesh.faceCount(); ++f)
        mms.boundaryDisplacement[f - nInternal] = solution.displacement(geom.faceCentroid[f]);
    return mms;
}

/// Volume-weighted error norms of a numerical field against the closed form.
struct ErrorReport {
    double l2 = 0.0;
    double linf = 0.0;
    double h = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN();  // set between consecutive meshes
};

inline ErrorReport errorNorms(const std::vector<Vec3>& numerical,
                              const ManufacturedSolution& solution, const MeshGeometry& geom) {
    ErrorReport rep;
    double sumV = 0.0;
    double sumE2 = 0.0;
    const int nCells = static_cast<int>(numerical.size());
    for (int c = 0; c < nCells; ++c) {
        const Vec3 err = numerical[c] - solution.displacement(geom.cellCentroid[c]);
        const double e = mag(err);
        sumE2 += geom.cellVolume[c] * e * e;
        sumV += geom.cellVolume[c];
        rep.linf = std::max(rep.linf, e);
    }
    rep.l2 = std::sqrt(sumE2 / sumV);
    rep.h = std::cbrt(sumV / nCells);
    return rep;
}

/// Pairwise observed convergence orders p = ln(e_c/e_f)/ln(h_c/h_f) on a
/// sequence of refined meshes. A zero fine-mesh error reports +inf.
inline std::vector<double> observedOrder(const std::vector<ErrorReport>& reports) {
    if (reports.size() < 2)
        throw InvalidArgumentError("observedOrder needs at least two error reports");
    std::vector<double> orders;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (!(reports[i].h < reports[i - 1].h))
            throw InvalidArgumentError("observedOrder requires strictly decreasing mesh spacing");
        if (reports[i].l2 == 0.0) {
            orders.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        orders.push_back(std::log(reports[i - 1].l2 / reports[i].l2) /
                         std::log(reports[i - 1].h / reports[i].h));
    }
    return orders;
}

// ---------------------------------------------------------------------------
// Thick-walled cylinder benchmark (plane strain, internal pressure)
// ---------------------------------------------------------------------------

struct LameCylinderSolution {
    double innerRadius = 0.0;
    double outerRadius = 0.0;
    double pressure = 0.0;
    LinearElasticMaterial material;

    double sigmaRadial(double r) const {
        const double a2 = innerRadius * innerRadius, b2 = outerRadius * outerRadius;
        return pressure * a2 / (b2 - a2) * (1.0 - b2 / (r * r));
    }
    double sigmaHoop(double r) const {
        const double a2 = innerRadius * innerRadius, b2 = outerRadius * outerRadius;
        return pressure * a2 / (b2 - a2) * (1.0 + b2 / (r * r));
    }
    double radialDisplacement(double r) const {
        const double a2 = innerRadius * innerRadius, b2 = outerRadius * outerRadius;
        const double amp = pressure * a2 / (b2 - a2);
        const double nu = material.poissonRatio;
        return (1.0 + nu) * amp / material.youngsModulus *
               ((1.0 - 2.0 * nu) * r + b2 / r);
    }
};

inline LameCylinderSolution lameThickCylinder(double innerRadius, double outerRadius,
                                              double pressure,
                                              const LinearElasticMaterial& material) {
    if (!(0.0 < innerRadius && innerRadius < outerRadius))
        throw InvalidArgumentError("lameThickCylinder requires 0 < a < b");
    if (!(pressure > 0.0)) throw InvalidArgumentError("lameThickCylinder requires p > 0");
    return {innerRadius, outerRadius, pressure, material};
}

/// Quasi-2-D quarter annulus, one cell thick in z: the benchmark fixture for
/// the thick-cylinder case. Patches: inner/outer (traction) and
/// thetaMin/thetaMax/zMin/zMax (symmetry).
inline PolyMesh buildQuarterAnnulusMesh(double innerRadius, double outerRadius, double thickness,
                                        int nRadial, int nTheta) {
    if (!(0.0 < innerRadius && innerRadius < outerRadius) || !(thickness > 0.0))
        throw InvalidArgumentError("invalid annulus dimensions");
    if (nRadial < 1 || nTheta < 1) throw InvalidArgumentError("invalid annulus divisions");

    const double pi = 3.14159265358979323846;
    PolyMesh mesh;
    mesh.cellCount = nRadial * nTheta;

    const auto pid = [&](int i, int j, int k) { return i + (nRadial + 1) * (j + (nTheta + 1) * k); };
    const auto cid = [&](int i, int j) { return i + nRadial * j; };

    for (int k = 0; k <= 1; ++k)
        for (int j = 0; j <= nTheta; ++j)
            for (int i = 0; i <= nRadial; ++i) {
                const double r = innerRadius + (outerRadius - innerRadius) * i / nRadial;
                const double th = 0.5 * pi * j / nTheta;
                mesh.points.push_back({r * std::cos(th), r * std::sin(th), thickness * k});
            }

    for (int j = 0; j < nTheta; ++j)
        for (int i = 0; i < nRadial; ++i) {
            if (i + 1 < nRadial) {
                mesh.faces.push_back(
                    {pid(i + 1, j, 0), pid(i + 1, j + 1, 0), pid(i + 1, j + 1, 1), pid(i + 1, j, 1)});
                mesh.owner.push_back(cid(i, j));
                mesh.neighbour.push_back(cid(i + 1, j));
            }
            if (j + 1 < nTheta) {
                mesh.faces.push_back(
                    {pid(i, j + 1, 0), pid(i, j + 1, 1), pid(i + 1, j + 1, 1), pid(i + 1, j + 1, 0)});
                mesh.owner.push_back(cid(i, j));
                mesh.neighbour.push_back(cid(i, j + 1));
            }
        }

    // Cell id ordering runs radially first, so the +r/+theta emission above
    // keeps owner < neighbour.
    const auto addPatch = [&](const std::string& name, PatchKind kind, auto&& emit) {
        BoundaryPatch p;
        p.name = name;
        p.kind = kind;
        p.startFace = mesh.faceCount();
        emit();
        p.faceCount = mesh.faceCount() - p.startFace;
        mesh.patches.push_back(std::move(p));
    };

    addPatch("inner", PatchKind::traction, [&] {
        for (int j = 0; j < nTheta; ++j) {
            mesh.faces.push_back({pid(0, j, 0), pid(0, j, 1), pid(0, j + 1, 1), pid(0, j + 1, 0)});
            mesh.owner.push_back(cid(0, j));
        }
    });
    addPatch("outer", PatchKind::traction, [&] {
        for (int j = 0; j < nTheta; ++j) {
            mesh.faces.push_back({pid(nRadial, j, 0), pid(nRadial, j + 1, 0), pid(nRadial, j + 1, 1),
                                  pid(nRadial, j, 1)});
            mesh.owner.push_back(cid(nRadial - 1, j));
        }
    });
    addPatch("thetaMin", PatchKind::symmetry, [&] {
        for (int i = 0; i < nRadial; ++i) {
            mesh.faces.push_back({pid(i, 0, 0), pid(i + 1, 0, 0), pid(i + 1, 0, 1), pid(i, 0, 1)});
            mesh.owner.push_back(cid(i, 0));
        }
    });
    addPatch("thetaMax", PatchKind::symmetry, [&] {
        for (int i = 0; i < nRadial; ++i) {
            mesh.faces.push_back(
                {pid(i, nTheta, 0), pid(i, nTheta, 1), pid(i + 1, nTheta, 1), pid(i + 1, nTheta, 0)});
            mesh.owner.push_back(cid(i, nTheta - 1));
        }
    });
    addPatch("zMin", PatchKind::symmetry, [&] {
        for (int j = 0; j < nTheta; ++j)
            for (int i = 0; i < nRadial; ++i) {
                mesh.faces.push_back({pid(i, j, 0), pid(i, j + 1, 0), pid(i + 1, j + 1, 0),
                                      pid(i + 1, j, 0)});
                mesh.owner.push_back(cid(i, j));
            }
    });
    addPatch("zMax", PatchKind::symmetry, [&] {
        for (int j = 0; j < nTheta; ++j)
            for (int i = 0; i < nRadial; ++i) {
                mesh.faces.push_back({pid(i, j, 1), pid(i + 1, j, 1), pid(i + 1, j + 1, 1),
                                      pid(i, j + 1, 1)});
                mesh.owner.push_back(cid(i, j));
            }
    });

    return mesh;
}

// ---------------------------------------------------------------------------
// Convergence study driver
// ---------------------------------------------------------------------------

struct MmsStudyResult {
    std::vector<ErrorReport> reports;
    std::vector<double> orders;
    bool pass = false;
    std::string table;  // "h L2 Linf order" rows, deterministic formatting
};

/// Runs the manufactured solution on unit-cube block meshes of the given
/// sizes with all-Dirichlet boundaries, reports the error norms and pairwise
/// orders. Passing means the final pairwise order reaches the threshold, or
/// the scheme solved the field to round-off (affine entries).
inline MmsStudyResult runMmsStudy(const ManufacturedSolution& solution,
                                  const LinearElasticMaterial& material,
                                  const std::vector<int>& sizes, SolverControls controls,
                                  double orderThreshold = 1.9) {
    if (sizes.empty()) throw InvalidArgumentError("mms study needs at least one mesh size");
    constexpr double exactFloor = 1e-8;

    MmsStudyResult result;
    for (int n : sizes) {
        if (n < 2) throw InvalidArgumentError("mms study mesh size must be at least 2");
        const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {n, n, n});
        const MeshGeometry geom = computeGeometry(mesh);
        const MmsCase mms = mmsBodyForce(solution, material, mesh, geom);

        BoundaryConditions bcs;
        bcs.faceKind.assign(mesh.boundaryFaceCount(), PatchKind::fixedDisplacement);
        bcs.faceValue = mms.boundaryDisplacement;

        VectorField u = initialiseField(mesh, Vec3{}, &bcs);
        TimeState state;
        state.steady = true;
        logInfo("mms " + solution.name + ": solving " + std::to_string(n) + "^3 mesh");
        solveTimeStep(u, material, mesh, geom, bcs, mms.bodyForce, state, controls);
        result.reports.push_back(errorNorms(u.cellValues, solution, geom));
    }

    if (result.reports.size() >= 2) {
        result.orders = observedOrder(result.reports);
        for (std::size_t i = 0; i < result.orders.size(); ++i)
            result.reports[i + 1].order = result.orders[i];
    }

    std::string table = "h L2 Linf order\n";
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        const auto& r = result.reports[i];
        table += formatSci(r.h) + " " + formatSci(r.l2) + " " + formatSci(r.linf) + " ";
        if (i == 0)
            table += "-";
        else if (r.l2 <= exactFloor)
            table += "exact";
        else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", r.order);
            table += buf;
        }
        table += "\n";
    }
    result.table = std::move(table);

    const auto& last = result.reports.back();
    result.pass = last.l2 <= exactFloor ||
                  (!result.orders.empty() && result.orders.back() >= orderThreshold);
    return result;
}

}  // namespace fvsolid
