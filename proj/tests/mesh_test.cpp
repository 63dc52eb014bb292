#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "fvsolid/fvsolid.hpp"
#include "test_support.hpp"

using namespace fvsolid;
using testsupport::divergenceVolume;
using testsupport::perturbedBlockMesh;

TEST(BlockMesh, SingleUnitCube) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {1, 1, 1});
    EXPECT_EQ(mesh.cellCount, 1);
    EXPECT_EQ(mesh.faceCount(), 6);
    EXPECT_EQ(mesh.internalFaceCount(), 0);
    EXPECT_EQ(mesh.points.size(), 8u);
    EXPECT_EQ(mesh.patches.size(), 6u);
}

TEST(BlockMesh, TwoCells) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {2, 1, 1});
    EXPECT_EQ(mesh.cellCount, 2);
    EXPECT_EQ(mesh.faceCount(), 11);
    EXPECT_EQ(mesh.internalFaceCount(), 1);
    EXPECT_EQ(mesh.owner[0], 0);
    EXPECT_EQ(mesh.neighbour[0], 1);
}

// Internal face count against a brute-force lattice enumeration.
TEST(BlockMesh, InternalFaceCountMatchesLatticeEnumeration) {
    const int nx = 4, ny = 3, nz = 2;
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {nx, ny, nz});
    EXPECT_EQ(mesh.cellCount, 24);

    int expected = 0;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (i + 1 < nx) ++expected;
                if (j + 1 < ny) ++expected;
                if (k + 1 < nz) ++expected;
            }
    EXPECT_EQ(expected, 46);
    EXPECT_EQ(mesh.internalFaceCount(), expected);
}

TEST(BlockMesh, RejectsBadArguments) {
    EXPECT_THROW(buildBlockMesh({0, 0, 0}, {1, 1, 1}, {0, 1, 1}), InvalidArgumentError);
    EXPECT_THROW(buildBlockMesh({0, 0, 0}, {1, -1, 1}, {1, 1, 1}), InvalidArgumentError);
    EXPECT_THROW(buildBlockMesh({0, 0, 0}, {1, 0, 1}, {1, 1, 1}), InvalidArgumentError);
}

TEST(Geometry, UnitCube) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {1, 1, 1});
    const MeshGeometry geom = computeGeometry(mesh);
    EXPECT_NEAR(geom.cellVolume[0], 1.0, 1e-14);
    EXPECT_NEAR(mag(geom.cellCentroid[0] - Vec3{0.5, 0.5, 0.5}), 0.0, 1e-14);
    for (int f = 0; f < mesh.faceCount(); ++f) {
        EXPECT_NEAR(mag(geom.faceArea[f]), 1.0, 1e-14);
        // each face centroid sits at the centre of a cube face
        int onBoundary = 0;
        for (int d = 0; d < 3; ++d) {
            const double c = geom.faceCentroid[f][d];
            if (std::abs(c) < 1e-14 || std::abs(c - 1.0) < 1e-14)
                ++onBoundary;
            else
                EXPECT_NEAR(c, 0.5, 1e-14);
        }
        EXPECT_EQ(onBoundary, 1);
    }
}

TEST(Geometry, TwoUnitCubesSharedFace) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {2, 1, 1}, {2, 1, 1});
    const MeshGeometry geom = computeGeometry(mesh);
    ASSERT_EQ(mesh.internalFaceCount(), 1);
    EXPECT_NEAR(mag(geom.delta[0] - Vec3{1, 0, 0}), 0.0, 1e-14);
    EXPECT_NEAR(geom.gamma[0], 0.5, 1e-14);
    EXPECT_NEAR(mag(geom.orthoComponent[0] - Vec3{1, 0, 0}), 0.0, 1e-14);
    EXPECT_NEAR(mag(geom.nonOrthoComponent[0]), 0.0, 1e-14);
}

TEST(Geometry, RightTetrahedronVolume) {
    PolyMesh mesh;
    mesh.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    mesh.faces = {{0, 2, 1}, {0, 3, 2}, {0, 1, 3}, {1, 2, 3}};
    mesh.owner = {0, 0, 0, 0};
    mesh.patches.push_back({"walls", 0, 4, PatchKind::fixedDisplacement});
    mesh.cellCount = 1;

    const MeshGeometry geom = computeGeometry(mesh);
    EXPECT_NEAR(geom.cellVolume[0], 1.0 / 6.0, 1e-14);
    EXPECT_NEAR(divergenceVolume(mesh, geom, 0), geom.cellVolume[0], 1e-14);
}

// Non-orthogonal split on a sheared mesh: the internal face has unit area
// vector (1,0,0) while the cell-to-cell vector is (1,1,0)/sqrt(2), giving
// ortho (1,1,0) and nonOrtho (0,-1,0).
TEST(Geometry, OrthoSplitOnShearedMesh) {
    const double s = 1.0 / std::sqrt(2.0);
    PolyMesh mesh = buildBlockMesh({0, 0, 0}, {2 * s, 1, 1}, {2, 1, 1});
    for (auto& p : mesh.points) p.y += p.x;
    const MeshGeometry geom = computeGeometry(mesh);

    ASSERT_EQ(mesh.internalFaceCount(), 1);
    EXPECT_NEAR(mag(geom.faceArea[0] - Vec3{1, 0, 0}), 0.0, 1e-14);
    EXPECT_NEAR(mag(geom.delta[0] - Vec3{s, s, 0}), 0.0, 1e-14);
    EXPECT_NEAR(mag(geom.orthoComponent[0] - Vec3{1, 1, 0}), 0.0, 1e-13);
    EXPECT_NEAR(mag(geom.nonOrthoComponent[0] - Vec3{0, -1, 0}), 0.0, 1e-13);
    EXPECT_NEAR(geom.gamma[0], 0.5, 1e-13);
}

TEST(Geometry, StrictModeThrowsOnDegenerateCell) {
    PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {1, 1, 1});
    for (auto& p : mesh.points) p = {0, 0, 0};
    try {
        computeGeometry(mesh);
        FAIL() << "expected a degenerate-cell error";
    } catch (const MeshError& e) {
        EXPECT_NE(std::string(e.what()).find("cell 0"), std::string::npos);
    }
}

TEST(Geometry, StrictModeThrowsOnInvertedFace) {
    PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {2, 2, 2});
    std::reverse(mesh.faces[0].begin(), mesh.faces[0].end());
    try {
        computeGeometry(mesh);
        FAIL() << "expected an inverted-face error";
    } catch (const MeshError& e) {
        EXPECT_NE(std::string(e.what()).find("face 0"), std::string::npos);
    }
}

TEST(Validate, BlockMeshesAreClean) {
    for (const auto& div : {std::array<int, 3>{1, 1, 1}, {3, 2, 1}, {4, 4, 4}}) {
        const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 2, 3}, div);
        const MeshGeometry geom = computeGeometry(mesh);
        const ValidationReport report = validateMesh(mesh, geom);
        EXPECT_TRUE(report.clean());
    }
}

TEST(Validate, ReversedWindingReported) {
    PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {2, 2, 2});
    const int victim = 3;
    std::reverse(mesh.faces[victim].begin(), mesh.faces[victim].end());
    const MeshGeometry geom = computeGeometry(mesh, /*strict=*/false);
    const ValidationReport report = validateMesh(mesh, geom);
    EXPECT_FALSE(report.clean());
    EXPECT_TRUE(report.has(IssueCode::invertedFace, victim));
}

TEST(Validate, CollapsedFaceReported) {
    PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {2, 2, 2});
    const int victim = mesh.internalFaceCount();  // first boundary face
    auto& face = mesh.faces[victim];
    ASSERT_EQ(face.size(), 4u);
    // duplicated points collapse the quad onto a line segment
    mesh.points[face[1]] = mesh.points[face[0]];
    mesh.points[face[2]] = mesh.points[face[3]];
    const MeshGeometry geom = computeGeometry(mesh, /*strict=*/false);
    ASSERT_LT(mag(geom.faceArea[victim]), 1e-14);
    const ValidationReport report = validateMesh(mesh, geom);
    EXPECT_TRUE(report.has(IssueCode::zeroAreaFace, victim));
}

TEST(MeshIo, RoundTripIdentity) {
    const PolyMesh mesh = buildBlockMesh({0.1, -0.2, 0.33}, {1.5, 2.0, 0.7}, {2, 1, 1});
    std::stringstream buffer;
    writeMesh(mesh, buffer);
    const PolyMesh back = readMesh(buffer, "<buffer>");
    EXPECT_TRUE(structurallyEqual(mesh, back));
}

TEST(MeshIo, NeighbourLongerThanInternalFacesRejected) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {2, 1, 1});
    std::stringstream buffer;
    writeMesh(mesh, buffer);
    std::string text = buffer.str();
    const auto pos = text.find("neighbour 1\n1\n");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, std::string("neighbour 1\n1\n").size(), "neighbour 2\n1\n1\n");
    std::stringstream bad(text);
    try {
        readMesh(bad, "<buffer>");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("neighbour"), std::string::npos);
    }
}

TEST(MeshIo, ParseErrorCarriesLine) {
    std::stringstream bad("points 1\n0 0 oops\n");
    try {
        readMesh(bad, "<buffer>");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("<buffer>:2"), std::string::npos);
    }
}

TEST(MeshIo, HandWrittenTetrahedron) {
    const char* text =
        "# single right tetrahedron with unit legs\n"
        "points 4\n"
        "0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
        "faces 4\n"
        "3 0 2 1\n3 0 3 2\n3 0 1 3\n3 1 2 3\n"
        "owner 4\n0\n0\n0\n0\n"
        "neighbour 0\n"
        "patches 1\nwalls fixedDisplacement 0 4\n";
    std::stringstream in(text);
    const PolyMesh mesh = readMesh(in, "<tet>");
    EXPECT_EQ(mesh.cellCount, 1);
    EXPECT_EQ(mesh.boundaryFaceCount(), 4);
    const MeshGeometry geom = computeGeometry(mesh);
    EXPECT_NEAR(geom.cellVolume[0], 1.0 / 6.0, 1e-14);
    EXPECT_NEAR(divergenceVolume(mesh, geom, 0), 1.0 / 6.0, 1e-14);
}

// Property: every cell of a randomly perturbed valid mesh closes to 1e-10
// of its total face area, and the validator stays clean.
TEST(GeometryProperties, ClosednessOnPerturbedMeshes) {
    for (unsigned seed : {1u, 7u, 42u}) {
        const PolyMesh mesh = perturbedBlockMesh({0, 0, 0}, {1, 1, 1}, {4, 3, 3}, 0.25, seed);
        const MeshGeometry geom = computeGeometry(mesh);
        EXPECT_TRUE(validateMesh(mesh, geom).clean());
        const auto cellFaces = mesh.cellFaces();
        for (int c = 0; c < mesh.cellCount; ++c) {
            Vec3 sum;
            double total = 0.0;
            for (int f : cellFaces[c]) {
                sum += (mesh.owner[f] == c ? 1.0 : -1.0) * geom.faceArea[f];
                total += mag(geom.faceArea[f]);
            }
            EXPECT_LE(mag(sum), 1e-10 * total);
        }
    }
}

TEST(GeometryProperties, VolumeAdditivity) {
    const Vec3 extent{2.0, 1.5, 1.0};
    const double boxVolume = extent.x * extent.y * extent.z;
    for (unsigned seed : {3u, 11u}) {
        const PolyMesh mesh = perturbedBlockMesh({0, 0, 0}, extent, {5, 4, 3}, 0.2, seed);
        const MeshGeometry geom = computeGeometry(mesh);
        double sum = 0.0;
        for (double v : geom.cellVolume) sum += v;
        EXPECT_NEAR(sum, boxVolume, 1e-12 * boxVolume);
    }
}

TEST(GeometryProperties, TranslationInvariance) {
    const PolyMesh base = perturbedBlockMesh({0, 0, 0}, {1, 1, 1}, {3, 3, 3}, 0.2, 5);
    PolyMesh moved = base;
    const Vec3 shift{10.0, -5.0, 3.0};
    for (auto& p : moved.points) p += shift;

    const MeshGeometry g0 = computeGeometry(base);
    const MeshGeometry g1 = computeGeometry(moved);
    for (int c = 0; c < base.cellCount; ++c)
        EXPECT_NEAR(g1.cellVolume[c], g0.cellVolume[c], 1e-12 * g0.cellVolume[c]);
    for (int f = 0; f < base.faceCount(); ++f) {
        EXPECT_LE(mag(g1.faceArea[f] - g0.faceArea[f]), 1e-12 * mag(g0.faceArea[f]));
        EXPECT_LE(mag(g1.delta[f] - g0.delta[f]), 1e-12 * mag(g0.delta[f]));
        EXPECT_LE(mag(g1.orthoComponent[f] - g0.orthoComponent[f]),
                  1e-12 * mag(g0.orthoComponent[f]));
        EXPECT_LE(mag(g1.nonOrthoComponent[f] - g0.nonOrthoComponent[f]),
                  1e-12 * std::max(1.0, mag(g0.nonOrthoComponent[f])));
    }
    for (int f = 0; f < base.internalFaceCount(); ++f)
        EXPECT_NEAR(g1.gamma[f], g0.gamma[f], 1e-12);
}

// Mirroring a stretched two-cell mesh swaps the interpolation weight to
// 1 - gamma.
TEST(GeometryProperties, GammaMirrorSymmetry) {
    PolyMesh mesh = buildBlockMesh({0, 0, 0}, {3, 1, 1}, {2, 1, 1});
    for (auto& p : mesh.points)
        if (std::abs(p.x - 1.5) < 1e-12) p.x = 1.0;  // cells of width 1 and 2
    const MeshGeometry geom = computeGeometry(mesh);
    ASSERT_EQ(mesh.internalFaceCount(), 1);
    EXPECT_NEAR(geom.gamma[0], 2.0 / 3.0, 1e-13);

    PolyMesh mirrored = buildBlockMesh({0, 0, 0}, {3, 1, 1}, {2, 1, 1});
    for (auto& p : mirrored.points)
        if (std::abs(p.x - 1.5) < 1e-12) p.x = 2.0;  // mirrored split
    const MeshGeometry mg = computeGeometry(mirrored);
    EXPECT_NEAR(mg.gamma[0], 1.0 - geom.gamma[0], 1e-13);
}
