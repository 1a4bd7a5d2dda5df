#include "spikecert/spikes.hpp"

#include <cmath>

namespace spikecert {

SpikeConfiguration SpikeConfiguration::make(std::vector<double> positions, std::vector<double> amplitudes) {
    SpikeConfiguration s;
    s.positions = std::move(positions);
    s.amplitudes = std::move(amplitudes);
    s.validate(false);
    return s;
}

bool SpikeConfiguration::all_positive() const {
    for (double a : amplitudes)
        if (!(a > 0.0)) return false;
    return true;
}

void SpikeConfiguration::validate(bool require_positive) const {
    if (positions.empty()) throw Error("spike configuration needs at least one spike");
    if (positions.size() != amplitudes.size()) throw Error("positions and amplitudes must have equal length");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!std::isfinite(positions[i]) || !std::isfinite(amplitudes[i]))
            throw DomainViolation("spike parameters must be finite");
        if (i > 0 && !(positions[i] > positions[i - 1]))
            throw DomainViolation("spike positions must be strictly increasing");
    }
    if (require_positive && !all_positive()) throw DomainViolation("spike amplitudes must be strictly positive");
}

} // namespace spikecert
