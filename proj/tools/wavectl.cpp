#include "wavectl/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace {

int run_one(const wavectl::ExperimentConfig& cfg, const std::string& out_dir,
            const std::string& suffix) {
    try {
        const auto paths = wavectl::run_experiment(cfg, out_dir, suffix);
        for (const auto& p : paths) std::cout << p << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error (" << wavectl::scenario_name(cfg.scenario) << suffix
                  << "): " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavectl - boundary control experiments for the 1D wave equation"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one experiment config");
    std::string config_path;
    std::string out_dir = "out";
    std::string sweep;
    long seed = -1;
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory (created if needed)");
    run->add_option("--sweep", sweep, "fan out over key=v1,v2,... (one run per value)");
    run->add_option("--seed", seed, "override the config's seed");

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open config '" << config_path << "'\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    wavectl::ParseResult parsed = wavectl::parse_config(buf.str());
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors)
            std::cerr << "config error (line " << e.line << "): " << e.message << "\n";
        return 2;
    }
    wavectl::ExperimentConfig cfg = *parsed.config;
    if (seed >= 0) {
        if (!cfg.nums.count("seed")) {
            std::cerr << "config error: scenario does not take a seed\n";
            return 2;
        }
        cfg.nums["seed"] = static_cast<double>(seed);
    }

    if (sweep.empty()) return run_one(cfg, out_dir, "");

    const auto eq = sweep.find('=');
    if (eq == std::string::npos) {
        std::cerr << "config error: --sweep expects key=v1,v2,...\n";
        return 2;
    }
    const std::string key = sweep.substr(0, eq);
    if (!cfg.nums.count(key)) {
        std::cerr << "config error: unknown sweep key '" << key << "'\n";
        return 2;
    }
    std::vector<double> values;
    std::stringstream list(sweep.substr(eq + 1));
    std::string item;
    while (std::getline(list, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (...) {
            std::cerr << "config error: non-numeric sweep value '" << item << "'\n";
            return 2;
        }
    }
    if (values.empty()) {
        std::cerr << "config error: empty sweep list\n";
        return 2;
    }

    // independent runs, separate output files, fan out concurrently
    std::vector<std::future<int>> futures;
    for (double v : values) {
        wavectl::ExperimentConfig c = cfg;
        c.nums[key] = v;
        std::ostringstream sfx;
        sfx << "_" << key << "=" << v;
        futures.push_back(std::async(std::launch::async, run_one, std::move(c), out_dir,
                                     sfx.str()));
    }
    int rc = 0;
    for (auto& f : futures) rc = std::max(rc, f.get());
    return rc;
}
