#pragma once

#include "lfr/censoring.hpp"

#include <vector>

namespace lfr {

// Bundled example datasets; see data/README.md for provenance and units.

// Successive failure intervals of the air conditioning system of Boeing 720
// plane 7909 (Proschan 1963), converted from hours to days.
std::vector<double> aircraft_times();
CensoringScheme aircraft_scheme();

// Survival times of chronic granulocytic leukemia patients (Bryson &
// Siddiqui 1969), converted from days to years.
std::vector<double> leukemia_times();
CensoringScheme leukemia_scheme();

}  // namespace lfr
