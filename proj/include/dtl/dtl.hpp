#pragma once

#include "dtl/base.hpp"
#include "dtl/signature.hpp"
#include "dtl/formula.hpp"
#include "dtl/print.hpp"
#include "dtl/parse.hpp"
#include "dtl/closure.hpp"
#include "dtl/word.hpp"
#include "dtl/structure.hpp"
#include "dtl/automaton.hpp"
#include "dtl/tableau.hpp"
#include "dtl/product.hpp"
#include "dtl/pipeline.hpp"
#include "dtl/bridge.hpp"
#include "dtl/export.hpp"
#include "dtl/spec_io.hpp"
