#pragma once

#include "neoclust/auglag.hpp"
#include "neoclust/block_updates.hpp"
#include "neoclust/boxqn.hpp"
#include "neoclust/io.hpp"
#include "neoclust/kernels.hpp"
#include "neoclust/log.hpp"
#include "neoclust/metrics.hpp"
#include "neoclust/model.hpp"
#include "neoclust/neo_iterative.hpp"
#include "neoclust/pipeline.hpp"
#include "neoclust/rounding.hpp"
#include "neoclust/solvers.hpp"
#include "neoclust/synthetic.hpp"
