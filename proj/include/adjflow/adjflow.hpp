#pragma once

// Umbrella header.

#include "adjflow/catalog.hpp"
#include "adjflow/expr.hpp"
#include "adjflow/odeint.hpp"
#include "adjflow/parser.hpp"
#include "adjflow/polynf.hpp"
#include "adjflow/rational.hpp"
#include "adjflow/report_io.hpp"
#include "adjflow/sampling.hpp"
#include "adjflow/symmat.hpp"
#include "adjflow/sysfile.hpp"
#include "adjflow/system.hpp"
#include "adjflow/verify.hpp"
