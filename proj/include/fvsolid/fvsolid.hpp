#pragma once

// Umbrella header for the fvsolid library.

#include "fvsolid/case.hpp"
#include "fvsolid/config.hpp"
#include "fvsolid/core.hpp"
#include "fvsolid/discretisation.hpp"
#include "fvsolid/fields.hpp"
#include "fvsolid/geometry.hpp"
#include "fvsolid/linsolve.hpp"
#include "fvsolid/material.hpp"
#include "fvsolid/mesh.hpp"
#include "fvsolid/mesh_io.hpp"
#include "fvsolid/solver.hpp"
#include "fvsolid/verify.hpp"
#include "fvsolid/vtk.hpp"
