#pragma once

#include "error.hpp"
#include "series.hpp"
#include "dissection.hpp"
#include "eta.hpp"
#include "eta_parser.hpp"
#include "laurent.hpp"
#include "symbolic.hpp"
#include "registry.hpp"
#include "report_io.hpp"
