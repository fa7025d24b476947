#pragma once
// Everything at once.

#include "fmgamma/errors.hpp"
#include "fmgamma/gridtaylor.hpp"
#include "fmgamma/indexinterp.hpp"
#include "fmgamma/oracle.hpp"
#include "fmgamma/printed_tables.hpp"
#include "fmgamma/quadmethods.hpp"
#include "fmgamma/result.hpp"
#include "fmgamma/salzer.hpp"
#include "fmgamma/series.hpp"
#include "fmgamma/specfun.hpp"
#include "fmgamma/survey.hpp"
#include "fmgamma/xprec.hpp"
