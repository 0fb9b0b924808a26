#pragma once

#include "qradon/bounds.hpp"
#include "qradon/constrained.hpp"
#include "qradon/errors.hpp"
#include "qradon/exact.hpp"
#include "qradon/families.hpp"
#include "qradon/graph.hpp"
#include "qradon/graph_expr.hpp"
#include "qradon/index_set.hpp"
#include "qradon/json_io.hpp"
#include "qradon/polynomial.hpp"
#include "qradon/space.hpp"
