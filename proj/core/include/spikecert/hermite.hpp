#pragma once

#include <cstdint>
#include <vector>

#include "spikecert/dd.hpp"

namespace spikecert {

// Coefficients (low degree first) of tH_k, defined by
//   tH_0 = 1,  tH_{k+1}(u) = tH_k'(u) - 2u tH_k(u),
// so that d^k/du^k e^{-u^2} = tH_k(u) e^{-u^2}. Degree of tH_k is exactly k
// and the coefficients are integers, kept exact in 64 bits (k <= 20).
const std::vector<std::int64_t>& hermite_aux_coeffs(int k);

int hermite_aux_max_order();

// tH_k(u) by Horner on the exact coefficients.
double hermite_aux(int k, double u);

template <class R>
R hermite_aux_eval(int k, R u) {
    const auto& c = hermite_aux_coeffs(k);
    R acc(double(c.back()));
    for (int i = int(c.size()) - 2; i >= 0; --i) acc = acc * u + double(c[std::size_t(i)]);
    return acc;
}

} // namespace spikecert
