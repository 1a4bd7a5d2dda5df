#pragma once

#include <utility>
#include <vector>

#include "spikecert/errors.hpp"

namespace spikecert {

enum class MeasureKind { DiscreteAtoms, LebesgueLine };

struct SampleAtom {
    double location = 0.0;
    double weight = 1.0;
};

// Sampling measure rho: either a finite list of weighted sample atoms
// (locations strictly increasing, weights strictly positive), or the
// symbolic Lebesgue measure on the whole line (Gaussian kernel only).
struct SamplingMeasure {
    MeasureKind kind = MeasureKind::DiscreteAtoms;
    std::vector<SampleAtom> atoms;

    static SamplingMeasure discrete(std::vector<SampleAtom> atoms);
    static SamplingMeasure discrete_locations(const std::vector<double>& locations, double weight = 1.0);
    static SamplingMeasure lebesgue_line();

    void validate() const;

    std::size_t size() const { return atoms.size(); }
    bool is_discrete() const { return kind == MeasureKind::DiscreteAtoms; }
    double total_mass() const; // throws InfiniteMass for LebesgueLine
    std::pair<double, double> location_span() const;

    SamplingMeasure scaled_weights(double factor) const;
};

} // namespace spikecert
