#pragma once

#include "twise/base_families.hpp"
#include "twise/bigint.hpp"
#include "twise/combiner.hpp"
#include "twise/designs.hpp"
#include "twise/errors.hpp"
#include "twise/family.hpp"
#include "twise/io.hpp"
#include "twise/permutation.hpp"
#include "twise/plan.hpp"
#include "twise/subsets.hpp"
#include "twise/verifier.hpp"
