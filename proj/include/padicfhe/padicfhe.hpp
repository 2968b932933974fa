#pragma once

#include "padicfhe/error.hpp"
#include "padicfhe/modular.hpp"
#include "padicfhe/padic.hpp"
#include "padicfhe/lipschitz.hpp"
#include "padicfhe/automaton.hpp"
#include "padicfhe/ciphers.hpp"
#include "padicfhe/analysis.hpp"
#include "padicfhe/formula.hpp"
