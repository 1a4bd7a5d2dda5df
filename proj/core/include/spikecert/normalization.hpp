#pragma once

#include "spikecert/scan.hpp"

namespace spikecert {

// Scan defaults with the identically-one detection threshold the degenerate
// 2M-sample case is specified against.
ScanPolicy default_normalized_policy();

// Certifies eta_V on a normalized framework. With exactly 2M sample atoms
// the normalized precertificate is identically 1 and the verdict reports
// IdenticallyOne; with 2M+1 or more atoms (Gaussian or Laplace) it is
// expected valid.
CertificateVerdict normalized_degeneracy_check(const Framework& nfw, const std::vector<double>& positions,
                                               const ScanPolicy& policy = default_normalized_policy(),
                                               const SolveOptions& solve = {});

} // namespace spikecert
