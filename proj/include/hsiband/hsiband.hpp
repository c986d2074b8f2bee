#pragma once

#include "hsiband/core.hpp"
#include "hsiband/error.hpp"
#include "hsiband/eval.hpp"
#include "hsiband/infotheory.hpp"
#include "hsiband/io.hpp"
#include "hsiband/rng.hpp"
#include "hsiband/selection.hpp"
#include "hsiband/synthgen.hpp"
