#pragma once

#include "arith.hpp"
#include "asympt.hpp"
#include "errors.hpp"
#include "euler.hpp"
#include "io.hpp"
#include "series.hpp"
#include "symmpoly.hpp"
#include "verify.hpp"
