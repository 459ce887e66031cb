#pragma once

#include "dunkl/envelope.hpp"
#include "dunkl/errors.hpp"
#include "dunkl/identities.hpp"
#include "dunkl/kernel_eval.hpp"
#include "dunkl/lambda.hpp"
#include "dunkl/orbit.hpp"
#include "dunkl/pde/heat_solver.hpp"
#include "dunkl/pde/polar_grid.hpp"
#include "dunkl/product_kernel.hpp"
#include "dunkl/rank1_kernel.hpp"
#include "dunkl/reflection_group.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/volume.hpp"
