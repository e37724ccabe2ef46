#ifndef LNELAB_LNELAB_HPP
#define LNELAB_LNELAB_HPP

// Umbrella header: numerical engine for deciding Lipschitz normal embedding
// of semialgebraic germs at the origin via link sweeps.

#include "lnelab/common.hpp"
#include "lnelab/criterion.hpp"
#include "lnelab/fixtures.hpp"
#include "lnelab/io.hpp"
#include "lnelab/link.hpp"
#include "lnelab/maps.hpp"
#include "lnelab/metric.hpp"
#include "lnelab/polynomial.hpp"
#include "lnelab/projection.hpp"
#include "lnelab/radius.hpp"
#include "lnelab/sampler.hpp"
#include "lnelab/semialgebraic.hpp"

#endif  // LNELAB_LNELAB_HPP
