#pragma once

#include "ctrlsparse/errors.hpp"
#include "ctrlsparse/tolerance.hpp"
#include "ctrlsparse/spectral.hpp"
#include "ctrlsparse/matching.hpp"
#include "ctrlsparse/pattern.hpp"
#include "ctrlsparse/matroid.hpp"
#include "ctrlsparse/feasibility.hpp"
#include "ctrlsparse/realization.hpp"
#include "ctrlsparse/macp.hpp"
#include "ctrlsparse/gramian.hpp"
#include "ctrlsparse/mscp.hpp"
#include "ctrlsparse/oracle.hpp"
#include "ctrlsparse/generators.hpp"
#include "ctrlsparse/bench.hpp"
