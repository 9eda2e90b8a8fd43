#include "lfr/datasets.hpp"

namespace lfr {

std::vector<double> aircraft_times() {
    return {0.417, 0.583, 0.833, 0.958, 1.000, 1.042, 1.083, 1.208, 1.833, 1.833,
            2.042, 2.333, 2.458, 2.500, 2.542, 2.583, 2.917, 3.167, 3.292, 3.500,
            3.750, 4.208, 4.917, 5.417, 6.500, 7.750, 8.667, 8.667, 12.917};
}

CensoringScheme aircraft_scheme() {
    CensoringScheme s;
    s.n = 29;
    s.r = 23;
    s.T = 13.0;
    s.removal_pattern = {0, 1, 0, 1, 0, 0, 0, 1, 0, 2, 0, 1};
    return s;
}

std::vector<double> leukemia_times() {
    return {0.019, 0.129, 0.159, 0.203, 0.485, 0.636, 0.748, 0.781, 0.869, 1.175, 1.206,
            1.219, 1.219, 1.282, 1.356, 1.362, 1.458, 1.564, 1.586, 1.592, 1.781, 1.923,
            1.959, 2.134, 2.413, 2.466, 2.548, 2.652, 2.951, 3.038, 3.600, 3.655, 3.745,
            4.203, 4.690, 4.888, 5.143, 5.167, 5.603, 5.633, 6.192, 6.655, 6.874};
}

CensoringScheme leukemia_scheme() {
    CensoringScheme s;
    s.n = 43;
    s.r = 33;
    s.T = 7.0;
    s.removal_pattern = {0, 0, 3, 0, 2, 1, 1, 1, 1, 0, 1};
    return s;
}

}  // namespace lfr
