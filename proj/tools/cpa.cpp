// Command-line front end: simulate one experiment, sweep a parameter grid,
// print oracle weak values, or run the cross-validation suite.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cpa/report.hpp"
#include "cpa/verify.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitIo = 4;

std::string read_input(const std::string& path) {
    if (path.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw cpa::IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw cpa::IoError("cannot open output file '" + path + "'");
    out << text;
}

struct SweepRange {
    double lo, hi, step;
};

SweepRange parse_sweep(const std::string& expr) {
    // T=lo:hi:step
    auto eq = expr.find('=');
    if (eq == std::string::npos || expr.substr(0, eq) != "T")
        throw cpa::ValidationError("sweep expression must look like T=0.05:0.95:0.05");
    std::string rest = expr.substr(eq + 1);
    SweepRange r{};
    char c1, c2;
    std::istringstream ss(rest);
    if (!(ss >> r.lo >> c1 >> r.hi >> c2 >> r.step) || c1 != ':' || c2 != ':' ||
        r.step <= 0.0 || r.hi < r.lo)
        throw cpa::ValidationError("bad sweep range '" + rest + "'");
    return r;
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& format, std::optional<std::uint64_t> seed,
                 std::optional<std::uint64_t> samples) {
    cpa::cli::ExperimentConfig cfg = cpa::cli::parse_config(read_input(config_path));
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    cpa::cli::Report rep = cpa::cli::run(cfg);
    if (format == "json") {
        write_output(out_path, cpa::cli::report_to_json(rep).dump(2) + "\n");
    } else if (format == "csv") {
        std::ostringstream os;
        os << cpa::cli::csv_header() << "\n";
        if (cfg.geometry != cpa::cli::Geometry::EntangledPair &&
            cfg.geometry != cpa::cli::Geometry::Cascade)
            os << cpa::cli::sweep_csv_row(cfg.transmissions[0], rep) << "\n";
        write_output(out_path, os.str());
    } else {
        throw cpa::ValidationError("unsupported format '" + format + "'");
    }
    return 0;
}

int run_sweep(const std::string& config_path, const std::string& out_path,
              const std::string& format, const std::string& sweep_expr) {
    cpa::cli::ExperimentConfig base = cpa::cli::parse_config(read_input(config_path));
    if (base.geometry == cpa::cli::Geometry::EntangledPair)
        throw cpa::ValidationError("sweep applies to T, not entangled-pair angles");
    SweepRange range = parse_sweep(sweep_expr);

    std::ostringstream csv;
    csv << cpa::cli::csv_header() << "\n";
    nlohmann::json rows = nlohmann::json::array();
    for (double t = range.lo; t <= range.hi + 1e-9; t += range.step) {
        cpa::cli::ExperimentConfig cfg = base;
        cfg.transmissions[0] = t;
        cpa::cli::Report rep = cpa::cli::run(cfg);
        if (format == "csv")
            csv << cpa::cli::sweep_csv_row(t, rep) << "\n";
        else
            rows.push_back(cpa::cli::report_to_json(rep));
    }
    if (format == "csv")
        write_output(out_path, csv.str());
    else if (format == "json")
        write_output(out_path, rows.dump(2) + "\n");
    else
        throw cpa::ValidationError("unsupported format '" + format + "'");
    return 0;
}

int run_weak_values(double t, const std::string& out_path) {
    cpa::cli::ExperimentConfig cfg;
    cfg.geometry = cpa::cli::Geometry::Interferometer;
    cfg.model = cpa::cli::Model::Oracle;
    cfg.transmissions = {t};
    cpa::cli::Report rep = cpa::cli::run(cfg);
    write_output(out_path, cpa::cli::report_to_json(rep).dump(2) + "\n");
    return 0;
}

int run_verify() {
    bool all_ok = true;
    for (const auto& c : cpa::verify::run_all()) {
        std::cout << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": "
                  << c.name << "  [" << c.detail << "]\n";
        all_ok = all_ok && c.passed;
    }
    std::cout << (all_ok ? "verify: all criteria passed\n"
                         : "verify: FAILURES detected\n");
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained-classical-field single-photon optics simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, sweep_expr;
    std::string sim_format = "json", sweep_format = "csv";
    std::optional<std::uint64_t> seed, samples;
    double weak_t = 0.7;

    auto* sim = app.add_subcommand("simulate", "run one experiment from a config");
    sim->add_option("--config", config_path, "config JSON path (stdin if omitted)");
    sim->add_option("--out", out_path, "output path (stdout if omitted)");
    sim->add_option("--format", sim_format, "json|csv");
    sim->add_option("--seed", seed, "Monte Carlo seed override");
    sim->add_option("--samples", samples, "Monte Carlo sample count override");

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
    sweep->add_option("--config", config_path, "base config JSON path");
    sweep->add_option("--out", out_path, "output path (stdout if omitted)");
    sweep->add_option("--format", sweep_format, "json|csv");
    sweep->add_option("--sweep", sweep_expr, "grid, e.g. T=0.05:0.95:0.05")->required();

    auto* weak = app.add_subcommand("weak-values", "oracle weak values for the interferometer");
    weak->add_option("--T", weak_t, "first splitter transmission")->default_val(0.7);
    weak->add_option("--out", out_path, "output path (stdout if omitted)");

    auto* verify = app.add_subcommand("verify", "run the cross-validation suite");
    (void)verify;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand("simulate"))
            return run_simulate(config_path, out_path, sim_format, seed, samples);
        if (app.got_subcommand("sweep"))
            return run_sweep(config_path, out_path, sweep_format, sweep_expr);
        if (app.got_subcommand("weak-values"))
            return run_weak_values(weak_t, out_path);
        return run_verify();
    } catch (const cpa::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const cpa::PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return kExitPhysics;
    } catch (const cpa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
