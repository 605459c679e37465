#pragma once

#include "ctable/bench.hpp"
#include "ctable/compact_table.hpp"
#include "ctable/domain.hpp"
#include "ctable/generators.hpp"
#include "ctable/instance.hpp"
#include "ctable/oracle.hpp"
#include "ctable/propagator.hpp"
#include "ctable/reversible_sparse_bitset.hpp"
#include "ctable/solver.hpp"
#include "ctable/sparse_set.hpp"
#include "ctable/store.hpp"
#include "ctable/str2.hpp"
#include "ctable/trail.hpp"
