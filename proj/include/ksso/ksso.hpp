#pragma once

#include "automaton.hpp"
#include "bitset.hpp"
#include "composition.hpp"
#include "dot.hpp"
#include "observer.hpp"
#include "oracle.hpp"
#include "report.hpp"
#include "subautomata.hpp"
#include "verifier.hpp"
