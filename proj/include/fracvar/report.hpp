#pragma once

#include <map>
#include <string>
#include <vector>

namespace fracvar {

/// Plain record emitted by the lemma and consistency checks.
struct CheckReport {
    std::string name;
    std::vector<int> grid_sizes;
    std::map<std::string, double> metrics;
    bool pass = false;

    double metric(const std::string& key) const { return metrics.at(key); }
};

}  // namespace fracvar
