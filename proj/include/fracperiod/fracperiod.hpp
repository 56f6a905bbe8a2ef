#pragma once

#include "fracperiod/errors.hpp"
#include "fracperiod/gamma.hpp"
#include "fracperiod/special_functions.hpp"
#include "fracperiod/fractional_calculus.hpp"
#include "fracperiod/operator_model.hpp"
#include "fracperiod/mild_solver.hpp"
#include "fracperiod/asymptotic_analysis.hpp"
#include "fracperiod/scenario.hpp"
#include "fracperiod/report.hpp"
#include "fracperiod/bundled.hpp"
#include "fracperiod/cli.hpp"
