#pragma once

#include "mmf/core/errors.hpp"
#include "mmf/core/parallel.hpp"
#include "mmf/core/vec3.hpp"
#include "mmf/diagnostics/compare.hpp"
#include "mmf/diagnostics/field_io.hpp"
#include "mmf/diagnostics/norms.hpp"
#include "mmf/diagnostics/series.hpp"
#include "mmf/discretization.hpp"
#include "mmf/frames/frames.hpp"
#include "mmf/mesh/cubed_sphere.hpp"
#include "mmf/mesh/high_order_mesh.hpp"
#include "mmf/mesh/mesh_io.hpp"
#include "mmf/mesh/metrics.hpp"
#include "mmf/mesh/springs.hpp"
#include "mmf/operators/operators.hpp"
#include "mmf/operators/rossby_haurwitz.hpp"
#include "mmf/operators/study.hpp"
#include "mmf/sem/fields.hpp"
#include "mmf/sem/geometry.hpp"
#include "mmf/sem/gll.hpp"
#include "mmf/sem/overintegration.hpp"
#include "mmf/solvers/advection.hpp"
#include "mmf/solvers/maxwell.hpp"
#include "mmf/solvers/reaction_diffusion.hpp"
#include "mmf/solvers/rk4.hpp"
#include "mmf/solvers/swe.hpp"
#include "mmf/solvers/williamson.hpp"
