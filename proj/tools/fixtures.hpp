#pragma once

#include <string>
#include <vector>

namespace spikecert::cli {

struct FigurePanel {
    std::string name;
    std::string config_json;    // certify-style config
    bool expected_valid = true; // per the source result the figure illustrates
    std::string note;
};

// Synthetic configurations chosen to display the captioned phenomena; the
// source figures do not list their sample locations.
std::vector<FigurePanel> figure_panels(const std::string& figure);

std::vector<std::string> figure_names();

} // namespace spikecert::cli
