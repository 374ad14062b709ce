#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace psph::cli {

// Everything a command needs, reproducible from a recorded key=value file.
// Precedence: command-line flags > config file > defaults.
struct RunConfig {
    std::string command;

    int n = 5;
    int k = 2;
    std::int64_t lambda = 0;
    std::int64_t lambda_min = 0;
    std::int64_t lambda_max = 0;
    std::string progression = "default";
    int q_cap = 4;
    std::int64_t q_max = 0;  // 0: use N(lambda)
    double B = 1.0;
    double C = 1.0;
    std::vector<double> p_list = {1.0, 1.25, 1.5, 2.0};
    int grid = 4;
    std::string out = "out";
    std::string format = "csv";
    std::uint64_t seed = 12345;
    std::string algo = "mitm";
    std::int64_t budget = 1'000'000;
    int quad_points = 512;
    std::int64_t box_radius = 0;  // 0: use N
    std::int64_t kernel_lambda_max = 120;
    int fit_log = -1;  // -1: per-command default

    std::string serialize() const;
    static RunConfig load(const std::string& path);
};

}  // namespace psph::cli
