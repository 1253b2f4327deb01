#pragma once

#include "mimicry/error.hpp"
#include "mimicry/geometry.hpp"
#include "mimicry/model.hpp"
#include "mimicry/serialization.hpp"
#include "mimicry/keyframes.hpp"
#include "mimicry/adapters.hpp"
#include "mimicry/fixtures.hpp"
#include "mimicry/planning.hpp"
#include "mimicry/dynamics.hpp"
#include "mimicry/kdtree.hpp"
#include "mimicry/trajopt.hpp"
#include "mimicry/executor.hpp"
#include "mimicry/harness.hpp"
