#pragma once

#include <vector>

#include "spikecert/errors.hpp"

namespace spikecert {

// Point-mass configuration sum_i a_i delta_{x_i}, positions strictly
// increasing. Amplitudes are positive for the constrained problems; signed
// amplitudes are admitted only by the signed certificate variant.
struct SpikeConfiguration {
    std::vector<double> positions;
    std::vector<double> amplitudes;

    static SpikeConfiguration make(std::vector<double> positions, std::vector<double> amplitudes);

    std::size_t count() const { return positions.size(); }
    bool all_positive() const;
    void validate(bool require_positive = true) const;
};

} // namespace spikecert
