#pragma once

// Small random networks for oracle testing, plus random state formulae over
// their names.

#include "srpmc/automata/model.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace srpmc::testing {

struct RandomModelShape {
    int max_processes = 3;
    int max_locations = 4;
    int max_edges = 6;
};

/// Processes P0..Pn-1, each with local int `v` in [0, 2] and clock `x`;
/// global int `g` in [0, 2]; binary channel `a`, broadcast channel `b`.
/// Locations are named l0, l1, ...; tick is 1 or 2.
automata::SystemModel random_model(std::mt19937& rng, const RandomModelShape& shape = {});

/// Random state formula over the names of a random_model result.
std::string random_formula(std::mt19937& rng, const automata::SystemModel& model, int depth = 3);

/// Random query text of one of the five kinds.
std::string random_query(std::mt19937& rng, const automata::SystemModel& model);

}  // namespace srpmc::testing
