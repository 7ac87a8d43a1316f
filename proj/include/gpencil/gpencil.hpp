#pragma once

#include "errors.hpp"
#include "vec.hpp"
#include "expr.hpp"
#include "curve.hpp"
#include "rmf.hpp"
#include "pencil.hpp"
#include "ruled.hpp"
#include "verify.hpp"
#include "mesh_io.hpp"
#include "config.hpp"
#include "fixtures.hpp"
#include "jobs.hpp"
