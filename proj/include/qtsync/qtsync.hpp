#pragma once

#include "qtsync/certifier.hpp"
#include "qtsync/dynamics.hpp"
#include "qtsync/energy.hpp"
#include "qtsync/enumerate.hpp"
#include "qtsync/forest.hpp"
#include "qtsync/graph.hpp"
#include "qtsync/landscape.hpp"
#include "qtsync/newton.hpp"
#include "qtsync/rng.hpp"
#include "qtsync/twins.hpp"
