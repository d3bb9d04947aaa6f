#pragma once
// Everything except the command-line driver.

#include "cubecx/certificate.hpp"
#include "cubecx/common.hpp"
#include "cubecx/complex.hpp"
#include "cubecx/cubical_map.hpp"
#include "cubecx/development.hpp"
#include "cubecx/dual.hpp"
#include "cubecx/fiber.hpp"
#include "cubecx/fixtures.hpp"
#include "cubecx/freegroup.hpp"
#include "cubecx/hyperplane.hpp"
#include "cubecx/io.hpp"
#include "cubecx/pipeline.hpp"
#include "cubecx/smallcancel.hpp"
#include "cubecx/wallspace.hpp"
