#pragma once

#include "roofkit/errors.hpp"
#include "roofkit/io.hpp"
#include "roofkit/maximal.hpp"
#include "roofkit/measures.hpp"
#include "roofkit/random.hpp"
#include "roofkit/roofs.hpp"
#include "roofkit/simplexfn.hpp"
#include "roofkit/states.hpp"
#include "roofkit/types.hpp"
