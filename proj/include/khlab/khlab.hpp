#pragma once

#include "khlab/braid.hpp"
#include "khlab/cube.hpp"
#include "khlab/diagram.hpp"
#include "khlab/homology.hpp"
#include "khlab/invariants.hpp"
#include "khlab/polynomial.hpp"
#include "khlab/smith.hpp"
#include "khlab/verify.hpp"
