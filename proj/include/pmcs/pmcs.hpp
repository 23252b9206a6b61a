#pragma once

#include "pmcs/error.hpp"
#include "pmcs/fock.hpp"
#include "pmcs/nonclassicality.hpp"
#include "pmcs/special_functions.hpp"
#include "pmcs/states.hpp"
#include "pmcs/sweep.hpp"
#include "pmcs/types.hpp"
#include "pmcs/wavefunctions.hpp"
#include "pmcs/weyl.hpp"
