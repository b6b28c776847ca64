#pragma once

#include "entrosteer/qmat.hpp"
#include "entrosteer/measure.hpp"
#include "entrosteer/infotheory.hpp"
#include "entrosteer/witness.hpp"
#include "entrosteer/cvgauss.hpp"
#include "entrosteer/montecarlo.hpp"
#include "entrosteer/io.hpp"
