#pragma once

#include "robsup/event_set.hpp"
#include "robsup/alphabet.hpp"
#include "robsup/automaton.hpp"
#include "robsup/operations.hpp"
#include "robsup/supervisor.hpp"
#include "robsup/attack.hpp"
#include "robsup/arena.hpp"
#include "robsup/synthesis.hpp"
#include "robsup/extraction.hpp"
#include "robsup/verification.hpp"
#include "robsup/grid.hpp"
#include "robsup/io.hpp"
