#pragma once

// Umbrella header.
#include "fokas/complex_plane.hpp"
#include "fokas/boundary_data.hpp"
#include "fokas/quadrature.hpp"
#include "fokas/oscillatory.hpp"
#include "fokas/transforms.hpp"
#include "fokas/evaluator.hpp"
#include "fokas/oracle.hpp"
#include "fokas/dispersion.hpp"
#include "fokas/config.hpp"
#include "fokas/output.hpp"
#include "fokas/acceptance.hpp"
