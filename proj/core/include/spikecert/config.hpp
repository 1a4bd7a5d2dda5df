#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikecert/framework.hpp"
#include "spikecert/scan.hpp"
#include "spikecert/solver.hpp"

namespace spikecert {

using json = nlohmann::json;

// JSON shapes:
//   kernel    {"family":"gaussian","sigma":1.0} | {"family":"laplace","c":0.0}
//   measure   {"kind":"discrete","atoms":[[s,w],...]} | {"kind":"lebesgue"}
//   framework {"kernel":{...},"measure":{...},"normalized":false}
//   spikes    {"positions":[...],"amplitudes":[...]}
//   scan      {"grid_points":4001,"pad":"auto","margin_tol":1e-7,
//              "curvature_tol_rel":1e-9,"excl_radius":"auto"}
Kernel kernel_from_json(const json& j);
json kernel_to_json(const Kernel& k);

SamplingMeasure measure_from_json(const json& j);
json measure_to_json(const SamplingMeasure& m);

Framework framework_from_json(const json& j);
json framework_to_json(const Framework& fw);

SpikeConfiguration spikes_from_json(const json& j);
json spikes_to_json(const SpikeConfiguration& s);

ScanPolicy scan_policy_from_json(const json& j);
json scan_policy_to_json(const ScanPolicy& p);

SolverOptions solver_options_from_json(const json& j);
ExperimentConfig experiment_from_json(const json& j);

json verdict_to_json(const CertificateVerdict& v);

json load_json_file(const std::filesystem::path& path);

// Applies a dot-path override such as "framework.kernel.sigma=2.0"; the
// value text is parsed as JSON when possible, else taken as a string.
void apply_override(json& config, const std::string& assignment);

// RFC-4180 CSV with a header row; numbers printed round-trip exact.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& cells);
    void write(const std::filesystem::path& path) const;
    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
};

std::string format_double(double v);

} // namespace spikecert
