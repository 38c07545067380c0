#pragma once

#include "mimoaf/ambiguity.hpp"
#include "mimoaf/check_report.hpp"
#include "mimoaf/errors.hpp"
#include "mimoaf/generators.hpp"
#include "mimoaf/io.hpp"
#include "mimoaf/mimo.hpp"
#include "mimoaf/operators.hpp"
#include "mimoaf/properties.hpp"
#include "mimoaf/signal.hpp"
#include "mimoaf/sl2.hpp"
#include "mimoaf/surface.hpp"
#include "mimoaf/symmetry.hpp"
