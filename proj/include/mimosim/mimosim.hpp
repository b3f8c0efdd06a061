#ifndef MIMOSIM_MIMOSIM_HPP
#define MIMOSIM_MIMOSIM_HPP

#include "mimosim/calibration.hpp"
#include "mimosim/channel.hpp"
#include "mimosim/event_queue.hpp"
#include "mimosim/experiment.hpp"
#include "mimosim/mac.hpp"
#include "mimosim/mc_oracle.hpp"
#include "mimosim/metrics.hpp"
#include "mimosim/phy.hpp"
#include "mimosim/rng.hpp"
#include "mimosim/simulation.hpp"
#include "mimosim/topology.hpp"
#include "mimosim/units.hpp"

#endif  // MIMOSIM_MIMOSIM_HPP
