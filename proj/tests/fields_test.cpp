#include <gtest/gtest.h>

#include "fvsolid/fvsolid.hpp"

using namespace fvsolid;

namespace {

BoundaryConditions allFixed(const PolyMesh& mesh, const Vec3& value) {
    BoundaryConditions bcs;
    bcs.faceKind.assign(mesh.boundaryFaceCount(), PatchKind::fixedDisplacement);
    bcs.faceValue.assign(mesh.boundaryFaceCount(), value);
    return bcs;
}

}  // namespace

TEST(Fields, ZeroInitialisation) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {2, 2, 2});
    const VectorField u = initialiseField(mesh, Vec3{});
    ASSERT_EQ(u.cellValues.size(), 8u);
    for (const auto& v : u.cellValues) EXPECT_EQ(mag(v), 0.0);
    for (const auto& v : u.oldTime) EXPECT_EQ(mag(v), 0.0);
    for (const auto& v : u.oldOldTime) EXPECT_EQ(mag(v), 0.0);
    for (const auto& v : u.patchValues) EXPECT_EQ(mag(v), 0.0);
}

TEST(Fields, UniformInitialisation) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {2, 1, 1});
    const Vec3 value{1, 2, 3};
    const VectorField u = initialiseField(mesh, value);
    for (const auto& v : u.cellValues) EXPECT_TRUE(v == value);
    for (const auto& v : u.oldTime) EXPECT_TRUE(v == value);
    for (const auto& v : u.oldOldTime) EXPECT_TRUE(v == value);
    EXPECT_EQ(u.cellValues.size(), u.oldTime.size());
    EXPECT_EQ(u.patchValues.size(), static_cast<std::size_t>(mesh.boundaryFaceCount()));
}

TEST(Fields, FixedDisplacementOverridesPatchValues) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {1, 1, 1});
    const auto bcs = allFixed(mesh, Vec3{0.1, 0, 0});
    const VectorField u = initialiseField(mesh, Vec3{}, &bcs);
    for (const auto& v : u.cellValues) EXPECT_EQ(mag(v), 0.0);
    for (const auto& v : u.patchValues) EXPECT_TRUE(v == (Vec3{0.1, 0, 0}));
}

TEST(Fields, AdvanceTimeShiftsLevels) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {1, 1, 1});
    VectorField u = initialiseField(mesh, Vec3{});
    const Vec3 a{1, 0, 0}, b{0, 2, 0}, c{0, 0, 3};
    u.cellValues[0] = a;
    u.oldTime[0] = b;
    u.oldOldTime[0] = c;

    TimeState state;
    state.steady = false;
    state.dt = 0.1;

    advanceTime(u, state);
    EXPECT_TRUE(u.cellValues[0] == a);
    EXPECT_TRUE(u.oldTime[0] == a);
    EXPECT_TRUE(u.oldOldTime[0] == b);
    EXPECT_EQ(state.stepIndex, 1);
    EXPECT_NEAR(state.currentTime, 0.1, 1e-15);

    const Vec3 d{4, 4, 4};
    u.cellValues[0] = d;
    advanceTime(u, state);
    EXPECT_TRUE(u.cellValues[0] == d);
    EXPECT_TRUE(u.oldTime[0] == d);
    EXPECT_TRUE(u.oldOldTime[0] == a);
    EXPECT_EQ(state.stepIndex, 2);
    EXPECT_NEAR(state.currentTime, 0.2, 1e-15);
}

// Sentinel property: the shift relabels whole values and never mixes
// components.
TEST(Fields, AdvanceTimeIsAPureShift) {
    const PolyMesh mesh = buildBlockMesh({0, 0, 0}, {1, 1, 1}, {3, 1, 1});
    VectorField u = initialiseField(mesh, Vec3{});
    for (int c = 0; c < mesh.cellCount; ++c) {
        u.cellValues[c] = {1000.0 + c, 2000.0 + c, 3000.0 + c};
        u.oldTime[c] = {-1000.0 - c, -2000.0 - c, -3000.0 - c};
        u.oldOldTime[c] = {7e7 + c, 8e7 + c, 9e7 + c};
    }
    const auto current = u.cellValues;
    const auto old = u.oldTime;

    TimeState state;
    state.steady = false;
    state.dt = 1.0;
    advanceTime(u, state);

    for (int c = 0; c < mesh.cellCount; ++c) {
        EXPECT_TRUE(u.cellValues[c] == current[c]);
        EXPECT_TRUE(u.oldTime[c] == current[c]);
        EXPECT_TRUE(u.oldOldTime[c] == old[c]);
    }
}
