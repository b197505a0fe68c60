#pragma once

#include "igap/exact.hpp"
#include "igap/linalg.hpp"
#include "igap/simplex.hpp"
#include "igap/polyhedra.hpp"
#include "igap/generator.hpp"
#include "igap/integer_opt.hpp"
#include "igap/bounds.hpp"
#include "igap/geometry.hpp"
#include "igap/instance_io.hpp"
#include "igap/report_json.hpp"
