#include "run_config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "primesphere/serialize.hpp"

namespace psph::cli {

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

std::string RunConfig::serialize() const {
    std::string s = "# primesphere run config v1\n";
    s += "command=" + command + "\n";
    std::map<std::string, std::string> kv;
    kv["n"] = std::to_string(n);
    kv["k"] = std::to_string(k);
    kv["lambda"] = std::to_string(lambda);
    kv["lambda_min"] = std::to_string(lambda_min);
    kv["lambda_max"] = std::to_string(lambda_max);
    kv["progression"] = progression;
    kv["q_cap"] = std::to_string(q_cap);
    kv["q_max"] = std::to_string(q_max);
    kv["B"] = format_double(B);
    kv["C"] = format_double(C);
    kv["p"] = join_doubles(p_list);
    kv["grid"] = std::to_string(grid);
    kv["out"] = out;
    kv["format"] = format;
    kv["seed"] = std::to_string(seed);
    kv["algo"] = algo;
    kv["budget"] = std::to_string(budget);
    kv["quad_points"] = std::to_string(quad_points);
    kv["box_radius"] = std::to_string(box_radius);
    kv["kernel_lambda_max"] = std::to_string(kernel_lambda_max);
    kv["fit_log"] = std::to_string(fit_log);
    for (const auto& [key, value] : kv) s += key + "=" + value + "\n";
    return s;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: bad line " + std::to_string(lineno) + " in '" +
                                     path + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "command") cfg.command = value;
            else if (key == "n") cfg.n = std::stoi(value);
            else if (key == "k") cfg.k = std::stoi(value);
            else if (key == "lambda") cfg.lambda = std::stoll(value);
            else if (key == "lambda_min") cfg.lambda_min = std::stoll(value);
            else if (key == "lambda_max") cfg.lambda_max = std::stoll(value);
            else if (key == "progression") cfg.progression = value;
            else if (key == "q_cap") cfg.q_cap = std::stoi(value);
            else if (key == "q_max") cfg.q_max = std::stoll(value);
            else if (key == "B") cfg.B = std::stod(value);
            else if (key == "C") cfg.C = std::stod(value);
            else if (key == "p") cfg.p_list = split_doubles(value);
            else if (key == "grid") cfg.grid = std::stoi(value);
            else if (key == "out") cfg.out = value;
            else if (key == "format") cfg.format = value;
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "algo") cfg.algo = value;
            else if (key == "budget") cfg.budget = std::stoll(value);
            else if (key == "quad_points") cfg.quad_points = std::stoi(value);
            else if (key == "box_radius") cfg.box_radius = std::stoll(value);
            else if (key == "kernel_lambda_max") cfg.kernel_lambda_max = std::stoll(value);
            else if (key == "fit_log") cfg.fit_log = std::stoi(value);
            else throw std::runtime_error("config: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config: bad value for '" + key + "' in '" + path + "'");
        }
    }
    return cfg;
}

}  // namespace psph::cli
