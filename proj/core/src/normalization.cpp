#include "spikecert/normalization.hpp"

namespace spikecert {

ScanPolicy default_normalized_policy() {
    ScanPolicy p;
    p.identically_one_tol = 1e-9;
    return p;
}

CertificateVerdict normalized_degeneracy_check(const Framework& nfw, const std::vector<double>& positions,
                                               const ScanPolicy& policy, const SolveOptions& solve) {
    if (!nfw.normalized()) throw Error("normalized_degeneracy_check expects a normalized framework");
    auto spikes = SpikeConfiguration::make(positions, std::vector<double>(positions.size(), 1.0));
    SolveOptions s = solve;
    // the degenerate K = 2M case makes the certificate coefficients exact
    // only in extended precision; engage it unconditionally here
    s.force_extended = true;
    return certify_spikes(nfw, spikes, policy, s);
}

} // namespace spikecert
