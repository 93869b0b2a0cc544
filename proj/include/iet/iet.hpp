#pragma once

#include "iet/errors.hpp"
#include "iet/exact.hpp"
#include "iet/alphabet.hpp"
#include "iet/transformation.hpp"
#include "iet/rauzy.hpp"
#include "iet/words.hpp"
#include "iet/construction.hpp"
#include "iet/projective.hpp"
#include "iet/generic_point.hpp"
#include "iet/serialization.hpp"
#include "iet/verify.hpp"
