#ifndef CETSP_CETSP_HPP
#define CETSP_CETSP_HPP

#include "cetsp/core.hpp"
#include "cetsp/random.hpp"
#include "cetsp/instance.hpp"
#include "cetsp/geometry.hpp"
#include "cetsp/metrics.hpp"
#include "cetsp/lp.hpp"
#include "cetsp/tsp.hpp"
#include "cetsp/milp.hpp"
#include "cetsp/mf_solver.hpp"
#include "cetsp/oracle.hpp"
#include "cetsp/report.hpp"

#endif  // CETSP_CETSP_HPP
