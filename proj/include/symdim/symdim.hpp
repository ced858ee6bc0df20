#pragma once

#include "symdim/amenability.hpp"
#include "symdim/certificate.hpp"
#include "symdim/config.hpp"
#include "symdim/cover.hpp"
#include "symdim/dad.hpp"
#include "symdim/error.hpp"
#include "symdim/language.hpp"
#include "symdim/pipeline.hpp"
#include "symdim/rational.hpp"
#include "symdim/rauzy.hpp"
#include "symdim/rokhlin.hpp"
#include "symdim/simplex.hpp"
#include "symdim/special.hpp"
#include "symdim/system.hpp"
#include "symdim/towers.hpp"
#include "symdim/words.hpp"
