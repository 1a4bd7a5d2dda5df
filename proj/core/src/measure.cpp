#include "spikecert/measure.hpp"

#include <cmath>

namespace spikecert {

SamplingMeasure SamplingMeasure::discrete(std::vector<SampleAtom> atoms) {
    SamplingMeasure m;
    m.kind = MeasureKind::DiscreteAtoms;
    m.atoms = std::move(atoms);
    m.validate();
    return m;
}

SamplingMeasure SamplingMeasure::discrete_locations(const std::vector<double>& locations, double weight) {
    std::vector<SampleAtom> atoms;
    atoms.reserve(locations.size());
    for (double s : locations) atoms.push_back({s, weight});
    return discrete(std::move(atoms));
}

SamplingMeasure SamplingMeasure::lebesgue_line() {
    SamplingMeasure m;
    m.kind = MeasureKind::LebesgueLine;
    return m;
}

void SamplingMeasure::validate() const {
    if (kind == MeasureKind::LebesgueLine) {
        if (!atoms.empty()) throw Error("lebesgue measure carries no sample atoms");
        return;
    }
    if (atoms.empty()) throw Error("discrete sampling measure needs at least one atom");
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (!std::isfinite(atoms[k].location)) throw DomainViolation("sample location must be finite");
        if (!(atoms[k].weight > 0.0)) throw DomainViolation("sample weights must be strictly positive");
        if (k > 0 && !(atoms[k].location > atoms[k - 1].location))
            throw DomainViolation("sample locations must be strictly increasing");
    }
}

double SamplingMeasure::total_mass() const {
    if (kind == MeasureKind::LebesgueLine) throw InfiniteMass("lebesgue measure has infinite mass");
    double m = 0.0;
    for (const auto& a : atoms) m += a.weight;
    return m;
}

std::pair<double, double> SamplingMeasure::location_span() const {
    if (kind == MeasureKind::LebesgueLine || atoms.empty()) return {0.0, 0.0};
    return {atoms.front().location, atoms.back().location};
}

SamplingMeasure SamplingMeasure::scaled_weights(double factor) const {
    SamplingMeasure m = *this;
    for (auto& a : m.atoms) a.weight *= factor;
    return m;
}

} // namespace spikecert
