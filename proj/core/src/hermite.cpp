#include "spikecert/hermite.hpp"

#include <mutex>
#include <stdexcept>

namespace spikecert {

namespace {

// tH_{k+1} = tH_k' - 2u tH_k in integer coefficient arithmetic.
std::vector<std::vector<std::int64_t>> build_table(int kmax) {
    std::vector<std::vector<std::int64_t>> table;
    table.push_back({1});
    for (int k = 0; k < kmax; ++k) {
        const auto& c = table.back();
        std::vector<std::int64_t> next(c.size() + 1, 0);
        for (std::size_t i = 1; i < c.size(); ++i) next[i - 1] += std::int64_t(i) * c[i];
        for (std::size_t i = 0; i < c.size(); ++i) next[i + 1] -= 2 * c[i];
        table.push_back(std::move(next));
    }
    return table;
}

constexpr int kMaxOrder = 20; // beyond this the integer coefficients overflow 64 bits

} // namespace

int hermite_aux_max_order() { return kMaxOrder; }

const std::vector<std::int64_t>& hermite_aux_coeffs(int k) {
    static const std::vector<std::vector<std::int64_t>> table = build_table(kMaxOrder);
    if (k < 0 || k > kMaxOrder) throw std::out_of_range("hermite_aux_coeffs: order out of range");
    return table[std::size_t(k)];
}

double hermite_aux(int k, double u) { return hermite_aux_eval<double>(k, u); }

} // namespace spikecert
