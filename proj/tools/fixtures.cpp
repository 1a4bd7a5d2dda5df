#include "fixtures.hpp"

#include <stdexcept>

namespace spikecert::cli {

namespace {

std::string gaussian_cfg(const std::string& atoms, const std::string& spikes) {
    return std::string(R"({"framework":{"kernel":{"family":"gaussian","sigma":1.0},)") +
           R"("measure":{"kind":"discrete","atoms":)" + atoms + R"(}},"spikes":)" + spikes + "}";
}

std::string laplace_cfg(const std::string& atoms, const std::string& spikes) {
    return std::string(R"({"framework":{"kernel":{"family":"laplace","c":0.0},)") +
           R"("measure":{"kind":"discrete","atoms":)" + atoms + R"(}},"spikes":)" + spikes + "}";
}

const char* kSpikes12 = R"({"positions":[1.0,2.0],"amplitudes":[1.0,1.0]})";
const char* kSpikes01 = R"({"positions":[0.0,1.0],"amplitudes":[1.0,1.0]})";

} // namespace

std::vector<std::string> figure_names() { return {"laplace-fig1", "gauss-fig2", "gauss-confined-fig3"}; }

std::vector<FigurePanel> figure_panels(const std::string& figure) {
    if (figure == "laplace-fig1") {
        // K = 2M, 2M+1, 2M+2 Laplace samples; valid regardless of placement
        return {
            {"k4", laplace_cfg("[[0.5,1],[1.0,1],[1.5,1],[2.5,1]]", kSpikes12), true,
             "2M samples suffice"},
            {"k5", laplace_cfg("[[0.5,1],[1.0,1],[1.5,1],[2.5,1],[3.5,1]]", kSpikes12), true,
             "2M+1 samples"},
            {"k6", laplace_cfg("[[0.5,1],[1.0,1],[1.5,1],[2.5,1],[3.5,1],[4.5,1]]", kSpikes12), true,
             "2M+2 samples"},
        };
    }
    if (figure == "gauss-fig2") {
        // sweep from adversarial placements to samplings that approximate the
        // uniform measure (weights carry the spacing)
        return {
            {"adversarial-a", gaussian_cfg("[[-0.5627,1],[-0.4626,1],[0.3811,1],[2.4826,1]]", kSpikes01),
             false, "clustered pair far from the right spike"},
            {"adversarial-b", gaussian_cfg("[[-1.376,1],[-0.2949,1],[0.391,1],[1.9621,1]]", kSpikes01),
             false, "lopsided placement"},
            {"uniform-n5", gaussian_cfg("[[-2.0,1.25],[-0.75,1.25],[0.5,1.25],[1.75,1.25],[3.0,1.25]]",
                                        kSpikes01),
             true, "coarse uniform sampling"},
            {"uniform-n9",
             gaussian_cfg("[[-4.0,1.125],[-2.875,1.125],[-1.75,1.125],[-0.625,1.125],[0.5,1.125],"
                          "[1.625,1.125],[2.75,1.125],[3.875,1.125],[5.0,1.125]]",
                          kSpikes01),
             true, "finer uniform sampling"},
            {"uniform-n17",
             gaussian_cfg("[[-6.0,0.8125],[-5.1875,0.8125],[-4.375,0.8125],[-3.5625,0.8125],"
                          "[-2.75,0.8125],[-1.9375,0.8125],[-1.125,0.8125],[-0.3125,0.8125],"
                          "[0.5,0.8125],[1.3125,0.8125],[2.125,0.8125],[2.9375,0.8125],"
                          "[3.75,0.8125],[4.5625,0.8125],[5.375,0.8125],[6.1875,0.8125]]",
                          kSpikes01),
             true, "near-uniform sampling"},
        };
    }
    if (figure == "gauss-confined-fig3") {
        // top row: wide windows around s*=0.5 (mixed outcomes); bottom row:
        // samples confined in a small interval (valid regardless of spikes)
        return {
            {"wide-a", gaussian_cfg("[[-0.5627,1],[-0.4626,1],[0.3811,1],[2.4826,1]]", kSpikes01), false,
             "wide draw, fails"},
            {"wide-b", gaussian_cfg("[[-1.376,1],[-0.2949,1],[0.391,1],[1.9621,1]]", kSpikes01), false,
             "wide draw, fails"},
            {"wide-c", gaussian_cfg("[[-1.5,1],[-0.1666666666666667,1],[1.1666666666666667,1],[2.5,1]]",
                                    kSpikes01),
             true, "wide equispaced draw, happens to pass"},
            {"confined-r0.5", gaussian_cfg("[[0.0,1],[0.3333333333333333,1],[0.6666666666666666,1],[1.0,1]]",
                                           kSpikes01),
             true, "samples in [0,1]"},
            {"confined-r0.25",
             gaussian_cfg("[[0.25,1],[0.4166666666666667,1],[0.5833333333333334,1],[0.75,1]]", kSpikes01),
             true, "samples in [0.25,0.75]"},
            {"confined-r0.1",
             gaussian_cfg("[[0.4,1],[0.4666666666666667,1],[0.5333333333333333,1],[0.6,1]]", kSpikes01),
             true, "samples in [0.4,0.6]"},
        };
    }
    throw std::invalid_argument("unknown figure: " + figure);
}

} // namespace spikecert::cli
