#pragma once

#include "shiftlab/error.hpp"
#include "shiftlab/forest.hpp"
#include "shiftlab/gauge.hpp"
#include "shiftlab/hypo.hpp"
#include "shiftlab/io.hpp"
#include "shiftlab/moments.hpp"
#include "shiftlab/psd.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/shift.hpp"
#include "shiftlab/subnormal.hpp"
#include "shiftlab/surd.hpp"
