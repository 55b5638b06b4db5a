#pragma once

#include "finsler/catalog.hpp"
#include "finsler/config.hpp"
#include "finsler/connection.hpp"
#include "finsler/curvature.hpp"
#include "finsler/diff.hpp"
#include "finsler/dynamics.hpp"
#include "finsler/expression.hpp"
#include "finsler/geometry.hpp"
#include "finsler/jet.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"
#include "finsler/schwarzian.hpp"
#include "finsler/tensor.hpp"
#include "finsler/invariants.hpp"
