#pragma once

#include "pairgen/analysis.hpp"
#include "pairgen/dop853.hpp"
#include "pairgen/errors.hpp"
#include "pairgen/field.hpp"
#include "pairgen/io.hpp"
#include "pairgen/mode_solver.hpp"
#include "pairgen/qve_oracle.hpp"
#include "pairgen/run.hpp"
#include "pairgen/scan.hpp"
#include "pairgen/spectrum.hpp"
#include "pairgen/validation.hpp"
#include "pairgen/vec3.hpp"
#include "pairgen/wigner.hpp"
