#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spikecert::cli {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<int> grid_override;
    std::optional<std::uint64_t> seed_override;
    std::vector<std::string> overrides; // key.path=value
};

int cmd_certify(const CommonArgs& args);
int cmd_criteria(const CommonArgs& args);
int cmd_solve(const CommonArgs& args);
int cmd_experiment(const CommonArgs& args);
int cmd_reproduce(const std::string& figure, const CommonArgs& args);

} // namespace spikecert::cli
