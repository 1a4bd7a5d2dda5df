#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spikecert/config.hpp"
#include "spikecert/normalization.hpp"

using namespace spikecert;

TEST_CASE("kernel json round trip") {
    Kernel g = kernel_from_json(json::parse(R"({"family":"gaussian","sigma":2.0})"));
    CHECK(g.family == KernelFamily::Gaussian);
    CHECK(g.sigma == 2.0);
    Kernel l = kernel_from_json(json::parse(R"({"family":"laplace","c":0.5,"max_deriv_order":8})"));
    CHECK(l.family == KernelFamily::Laplace);
    CHECK(l.c == 0.5);
    CHECK(l.max_deriv_order == 8);
    CHECK(kernel_from_json(kernel_to_json(l)).c == 0.5);
    CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"family":"cauchy"})")), ConfigError);
    CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"sigma":1.0})")), ConfigError);
}

TEST_CASE("measure json accepts pairs and bare locations") {
    SamplingMeasure m = measure_from_json(json::parse(R"({"kind":"discrete","atoms":[[1.0,2.0],[3.0,4.0]]})"));
    CHECK(m.atoms[1].weight == 4.0);
    SamplingMeasure bare = measure_from_json(json::parse(R"({"kind":"discrete","atoms":[1.0,2.0]})"));
    CHECK(bare.atoms[1].weight == 1.0);
    SamplingMeasure leb = measure_from_json(json::parse(R"({"kind":"lebesgue"})"));
    CHECK(leb.kind == MeasureKind::LebesgueLine);
    CHECK_THROWS_AS(measure_from_json(json::parse(R"({"kind":"discrete","atoms":[[1.0]]})")), ConfigError);
    CHECK_THROWS_AS(measure_from_json(json::parse(R"({"kind":"discrete","atoms":[[2.0,1],[1.0,1]]})")),
                    DomainViolation);
}

TEST_CASE("normalized laplace with a zero sample loads from config") {
    json cfg = json::parse(R"({"kernel":{"family":"laplace","c":0.0},
                               "measure":{"kind":"discrete","atoms":[[0.0,1],[1.0,1],[2.0,1]]},
                               "normalized":true})");
    Framework fw = framework_from_json(cfg);
    CHECK(fw.normalized());
    CertificateVerdict v = normalized_degeneracy_check(fw, {0.8});
    CHECK(v.valid);
    // the raw framework rejects the same sample
    cfg["normalized"] = false;
    CHECK_THROWS_AS(framework_from_json(cfg), DomainViolation);
}

TEST_CASE("scan policy auto fields") {
    ScanPolicy p = scan_policy_from_json(json::parse(R"({"grid_points":101,"pad":"auto","excl_radius":0.1})"));
    CHECK(p.grid_points == 101);
    CHECK(p.pad < 0.0);
    CHECK(p.excl_radius == 0.1);
    CHECK_THROWS_AS(scan_policy_from_json(json::parse(R"({"pad":"huge"})")), ConfigError);
    json back = scan_policy_to_json(ScanPolicy{});
    CHECK(back.at("pad") == "auto");
    CHECK(back.at("excl_radius") == "auto");
}

TEST_CASE("overrides navigate dot paths") {
    json cfg = json::parse(R"({"framework":{"kernel":{"family":"gaussian","sigma":1.0}}})");
    apply_override(cfg, "framework.kernel.sigma=2.5");
    CHECK(cfg.at("framework").at("kernel").at("sigma") == 2.5);
    apply_override(cfg, "scan.pad=auto");
    CHECK(cfg.at("scan").at("pad") == "auto");
    apply_override(cfg, "spikes.positions=[1.0,2.0]");
    CHECK(cfg.at("spikes").at("positions").size() == 2);
    CHECK_THROWS_AS(apply_override(cfg, "no_equals_sign"), ConfigError);
}

TEST_CASE("csv writer quotes and formats round trip") {
    CsvWriter csv({"a", "b"});
    csv.add_row({0.1, 3.0});
    csv.add_row_mixed({"with,comma", "with\"quote"});
    std::string s = csv.str();
    CHECK(s.find("a,b\r\n") == 0);
    CHECK(s.find("0.10000000000000001,3") != std::string::npos);
    CHECK(s.find("\"with,comma\",\"with\"\"quote\"") != std::string::npos);
}

TEST_CASE("experiment config parsing") {
    ExperimentConfig c = experiment_from_json(
        json::parse(R"({"noise_scales":[1e-6,1e-5],"alpha":0.5,"trials":7,"seed":9,"solver":{"opt_tol":1e-7}})"));
    CHECK(c.noise_scales.size() == 2);
    CHECK(c.trials == 7);
    CHECK(c.seed == 9);
    CHECK(c.solver.opt_tol == 1e-7);
    CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"alpha":1.0})")), ConfigError);
}
