#pragma once

#include "negspec/error.hpp"
#include "negspec/vectorize.hpp"
#include "negspec/similarity.hpp"
#include "negspec/laplacian.hpp"
#include "negspec/spectral.hpp"
#include "negspec/kmeans.hpp"
#include "negspec/criteria.hpp"
#include "negspec/metrics.hpp"
#include "negspec/io.hpp"
#include "negspec/harness.hpp"
