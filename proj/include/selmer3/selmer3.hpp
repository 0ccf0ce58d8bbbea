#pragma once

#include "selmer3/cubicforms.hpp"
#include "selmer3/descriptor.hpp"
#include "selmer3/errors.hpp"
#include "selmer3/localclass.hpp"
#include "selmer3/localfield.hpp"
#include "selmer3/oracle.hpp"
#include "selmer3/prym.hpp"
#include "selmer3/rational.hpp"
#include "selmer3/selmerratio.hpp"
#include "selmer3/twistfamilies.hpp"
