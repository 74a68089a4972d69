#pragma once

// Everything in one include.

#include "edlab/error.hpp"
#include "edlab/rng.hpp"
#include "edlab/parallel.hpp"
#include "edlab/rational.hpp"
#include "edlab/sequence.hpp"
#include "edlab/phase.hpp"
#include "edlab/numtheory.hpp"
#include "edlab/net.hpp"
#include "edlab/weights.hpp"
#include "edlab/averaging.hpp"
#include "edlab/correlation.hpp"
#include "edlab/discrepancy.hpp"
#include "edlab/search.hpp"
#include "edlab/gram.hpp"
#include "edlab/randomized.hpp"
