#pragma once

#include "egf/errors.hpp"
#include "egf/grid.hpp"
#include "egf/forcing.hpp"
#include "egf/solvers.hpp"
#include "egf/model.hpp"
#include "egf/pod.hpp"
#include "egf/rsvd.hpp"
#include "egf/interp.hpp"
#include "egf/io.hpp"
#include "egf/experiments.hpp"
