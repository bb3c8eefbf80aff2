// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MNEPV_MNEPV_HPP
#define MNEPV_MNEPV_HPP

#include "mnepv/apps.hpp"
#include "mnepv/errors.hpp"
#include "mnepv/io.hpp"
#include "mnepv/linalg.hpp"
#include "mnepv/problem.hpp"
#include "mnepv/report.hpp"
#include "mnepv/rng.hpp"
#include "mnepv/sampling.hpp"
#include "mnepv/solver.hpp"
#include "mnepv/stability.hpp"

#endif  // MNEPV_MNEPV_HPP
