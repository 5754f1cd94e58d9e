#pragma once

#include "errors.hpp"
#include "bigint.hpp"
#include "field.hpp"
#include "poly.hpp"
#include "places.hpp"
#include "group.hpp"
#include "cyclotomic.hpp"
#include "residue.hpp"
#include "rng.hpp"
#include "family.hpp"
#include "lfun.hpp"
#include "bspoly.hpp"
#include "parallel.hpp"
#include "counting.hpp"
#include "stats.hpp"
#include "io.hpp"
