#ifndef ECSQB_ECSQB_HPP
#define ECSQB_ECSQB_HPP

#include "ecsqb/bounds.hpp"
#include "ecsqb/errors.hpp"
#include "ecsqb/moments.hpp"
#include "ecsqb/oracle.hpp"
#include "ecsqb/qfim.hpp"
#include "ecsqb/states.hpp"
#include "ecsqb/sweep.hpp"
#include "ecsqb/verify.hpp"

#endif  // ECSQB_ECSQB_HPP
