#pragma once

#include "savpark/error.hpp"
#include "savpark/scenario.hpp"
#include "savpark/numerics.hpp"
#include "savpark/fleet_states.hpp"
#include "savpark/sappm.hpp"
#include "savpark/tappm.hpp"
#include "savpark/des.hpp"
#include "savpark/io.hpp"
#include "savpark/sweep.hpp"
#include "savpark/report.hpp"
