#pragma once

// Umbrella header: diagonals of rational functions over F_p, their automata,
// Ore annihilators, univariate rationalization, bounds and surveys.

#include "diagfp/error.hpp"
#include "diagfp/field.hpp"
#include "diagfp/multipoly.hpp"
#include "diagfp/unipoly.hpp"
#include "diagfp/rational.hpp"
#include "diagfp/parser.hpp"
#include "diagfp/series.hpp"
#include "diagfp/resultant.hpp"
#include "diagfp/linalg.hpp"
#include "diagfp/cartier.hpp"
#include "diagfp/diagonal.hpp"
#include "diagfp/automaton.hpp"
#include "diagfp/annihilator.hpp"
#include "diagfp/bounds.hpp"
#include "diagfp/rationalize.hpp"
#include "diagfp/survey.hpp"
#include "diagfp/io.hpp"
