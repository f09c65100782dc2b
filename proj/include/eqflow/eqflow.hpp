#pragma once

#include "eqflow/rational.hpp"
#include "eqflow/instance.hpp"
#include "eqflow/flow.hpp"
#include "eqflow/penalty.hpp"
#include "eqflow/shortest_path.hpp"
#include "eqflow/line_search.hpp"
#include "eqflow/equilibrium.hpp"
#include "eqflow/certificate.hpp"
#include "eqflow/solver.hpp"
#include "eqflow/oracle.hpp"
