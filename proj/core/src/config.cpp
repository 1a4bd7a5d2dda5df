#include "spikecert/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spikecert {

Kernel kernel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family")) throw ConfigError("kernel config needs a family");
    std::string fam = j.at("family").get<std::string>();
    int order = j.value("max_deriv_order", 12);
    if (fam == "gaussian") return Kernel::gaussian(j.value("sigma", 1.0), order);
    if (fam == "laplace") return Kernel::laplace(j.value("c", 0.0), order);
    throw ConfigError("unknown kernel family: " + fam);
}

json kernel_to_json(const Kernel& k) {
    json j;
    j["family"] = k.family_name();
    if (k.family == KernelFamily::Gaussian) j["sigma"] = k.sigma;
    else j["c"] = k.c;
    j["max_deriv_order"] = k.max_deriv_order;
    return j;
}

SamplingMeasure measure_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("measure config needs a kind");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "lebesgue") return SamplingMeasure::lebesgue_line();
    if (kind != "discrete") throw ConfigError("unknown measure kind: " + kind);
    std::vector<SampleAtom> atoms;
    for (const auto& entry : j.at("atoms")) {
        if (entry.is_array() && entry.size() == 2)
            atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
        else if (entry.is_number())
            atoms.push_back({entry.get<double>(), 1.0});
        else
            throw ConfigError("measure atoms must be [location, weight] pairs");
    }
    return SamplingMeasure::discrete(std::move(atoms));
}

json measure_to_json(const SamplingMeasure& m) {
    json j;
    if (m.kind == MeasureKind::LebesgueLine) {
        j["kind"] = "lebesgue";
        return j;
    }
    j["kind"] = "discrete";
    json atoms = json::array();
    for (const auto& a : m.atoms) atoms.push_back(json::array({a.location, a.weight}));
    j["atoms"] = atoms;
    return j;
}

Framework framework_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("framework config must be an object");
    Kernel k = kernel_from_json(j.at("kernel"));
    SamplingMeasure m = measure_from_json(j.at("measure"));
    if (j.value("normalized", false)) return normalize(std::move(k), std::move(m));
    return Framework(std::move(k), std::move(m), false);
}

json framework_to_json(const Framework& fw) {
    json j;
    j["kernel"] = kernel_to_json(fw.kernel());
    j["measure"] = measure_to_json(fw.measure());
    j["normalized"] = fw.normalized();
    return j;
}

SpikeConfiguration spikes_from_json(const json& j) {
    if (!j.is_object() || !j.contains("positions") || !j.contains("amplitudes"))
        throw ConfigError("spikes config needs positions and amplitudes");
    return SpikeConfiguration::make(j.at("positions").get<std::vector<double>>(),
                                    j.at("amplitudes").get<std::vector<double>>());
}

json spikes_to_json(const SpikeConfiguration& s) {
    json j;
    j["positions"] = s.positions;
    j["amplitudes"] = s.amplitudes;
    return j;
}

namespace {

double auto_or_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_string()) {
        if (v.get<std::string>() == "auto") return -1.0;
        throw ConfigError(std::string(key) + " must be a number or \"auto\"");
    }
    return v.get<double>();
}

} // namespace

ScanPolicy scan_policy_from_json(const json& j) {
    ScanPolicy p;
    if (j.is_null()) return p;
    p.grid_points = j.value("grid_points", p.grid_points);
    p.pad = auto_or_number(j, "pad", p.pad);
    p.margin_tol = j.value("margin_tol", p.margin_tol);
    p.curvature_tol_rel = j.value("curvature_tol_rel", p.curvature_tol_rel);
    p.excl_radius = auto_or_number(j, "excl_radius", p.excl_radius);
    p.refine_points = j.value("refine_points", p.refine_points);
    p.identically_one_tol = j.value("identically_one_tol", p.identically_one_tol);
    return p;
}

json scan_policy_to_json(const ScanPolicy& p) {
    json j;
    j["grid_points"] = p.grid_points;
    if (p.pad < 0.0) j["pad"] = "auto";
    else j["pad"] = p.pad;
    j["margin_tol"] = p.margin_tol;
    j["curvature_tol_rel"] = p.curvature_tol_rel;
    if (p.excl_radius < 0.0) j["excl_radius"] = "auto";
    else j["excl_radius"] = p.excl_radius;
    j["refine_points"] = p.refine_points;
    j["identically_one_tol"] = p.identically_one_tol;
    return j;
}

SolverOptions solver_options_from_json(const json& j) {
    SolverOptions o;
    if (j.is_null()) return o;
    o.opt_tol = j.value("opt_tol", o.opt_tol);
    o.max_outer = j.value("max_outer", o.max_outer);
    o.grid_points = j.value("grid_points", o.grid_points);
    o.refine_factor = j.value("refine_factor", o.refine_factor);
    o.max_newton = j.value("max_newton", o.max_newton);
    o.amp_floor = j.value("amp_floor", o.amp_floor);
    return o;
}

ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig c;
    if (!j.contains("noise_scales")) throw ConfigError("experiment config needs noise_scales");
    c.noise_scales = j.at("noise_scales").get<std::vector<double>>();
    c.alpha = j.value("alpha", c.alpha);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.lambda_floor = j.value("lambda_floor", c.lambda_floor);
    if (j.contains("solver")) c.solver = solver_options_from_json(j.at("solver"));
    return c;
}

json verdict_to_json(const CertificateVerdict& v) {
    json j;
    j["valid"] = v.valid;
    j["failure_reason"] = v.failure_reason == FailureReason::None ? json(nullptr) : json(to_string(v.failure_reason));
    j["global_margin"] = v.global_margin;
    j["curvature"] = v.curvature;
    j["excl_radii"] = v.excl_radii;
    j["grid"] = {{"lo", v.grid.lo}, {"hi", v.grid.hi}, {"uniform_points", v.grid.uniform_points},
                 {"total_points", v.grid.points.size()}};
    j["max_abs_eta_minus_one"] = v.max_abs_eta_minus_one;
    j["gram_condition"] = v.gram_condition;
    j["constraint_residual"] = v.constraint_residual;
    return j;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return j;
}

void apply_override(json& config, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override must look like key.path=value");
    std::string path = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    json* node = &config;
    std::size_t start = 0;
    while (true) {
        auto dot = path.find('.', start);
        std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("empty key in override path");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &((*node)[key]);
        start = dot + 1;
    }
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::add_row(const std::vector<double>& values) {
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_double(values[i]);
    }
    rows_.push_back(std::move(row));
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
        if (quote) {
            row += '"';
            for (char c : cells[i]) {
                if (c == '"') row += '"';
                row += c;
            }
            row += '"';
        } else {
            row += cells[i];
        }
    }
    rows_.push_back(std::move(row));
}

std::string CsvWriter::str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += header_[i];
    }
    out += "\r\n";
    for (const auto& r : rows_) {
        out += r;
        out += "\r\n";
    }
    return out;
}

void CsvWriter::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path.string());
    out << str();
}

} // namespace spikecert
