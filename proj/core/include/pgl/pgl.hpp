#pragma once

#include "pgl/error.hpp"
#include "pgl/graph_learning.hpp"
#include "pgl/imputation.hpp"
#include "pgl/io.hpp"
#include "pgl/kron_factorization.hpp"
#include "pgl/laplacian.hpp"
#include "pgl/metrics.hpp"
#include "pgl/qp_solver.hpp"
#include "pgl/spectral.hpp"
#include "pgl/synth.hpp"
