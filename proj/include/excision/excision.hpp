#pragma once

#include "excision/analytics.hpp"
#include "excision/errors.hpp"
#include "excision/excursion_ppp.hpp"
#include "excision/functionals.hpp"
#include "excision/montecarlo.hpp"
#include "excision/parallel.hpp"
#include "excision/path.hpp"
#include "excision/path_io.hpp"
#include "excision/quadrature.hpp"
#include "excision/refine.hpp"
#include "excision/report.hpp"
#include "excision/rng.hpp"
#include "excision/samplers.hpp"
#include "excision/stats.hpp"
#include "excision/svg.hpp"
#include "excision/transforms.hpp"
