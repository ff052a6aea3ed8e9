#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpa/averages.hpp"
#include "cpa/field_core.hpp"
#include "cpa/model_improved.hpp"
#include "cpa/model_simple.hpp"
#include "cpa/network.hpp"
#include "cpa/oracle.hpp"
#include "cpa/quadrature.hpp"

// The cross-validation suite: every headline claim checked at a pinned
// tolerance.  Used by both the acceptance test binary and the `verify` CLI
// subcommand.

namespace cpa::verify {

struct CriterionResult {
    int id;
    std::string name;
    bool passed;
    std::string detail;  // worst observed deviation or failure description
};

namespace detail {

// Grid points landing exactly on hundredths, so T = 0.50 is exact and the
// (T - R)-denominator formulas stay well conditioned.
inline std::vector<double> transmission_grid(double lo, double hi, double step) {
    const int ilo = static_cast<int>(std::lround(lo * 100.0));
    const int ihi = static_cast<int>(std::lround(hi * 100.0));
    const int istep = static_cast<int>(std::lround(step * 100.0));
    std::vector<double> g;
    for (int i = ilo; i <= ihi; i += istep) g.push_back(i / 100.0);
    return g;
}

struct Worst {
    double value = 0.0;
    void update(double v) { if (v > value) value = v; }
    std::string str() const {
        std::ostringstream os;
        os << "max deviation " << value;
        return os.str();
    }
};

}  // namespace detail

// 1. Simple-model single-splitter ratio P(A)/P(B) = T/R, equal to the Born
//    probabilities, to 1e-12 across the T grid.
inline CriterionResult criterion_simple_ratio() {
    detail::Worst w;
    for (double t : detail::transmission_grid(0.05, 0.95, 0.05)) {
        BeamsplitterSpec spec(t);
        auto probs = model_simple::outcome_probabilities_simple(spec);
        w.update(std::abs(probs.at("A") / probs.at("B") - t / (1.0 - t)));
        auto born = oracle::born_probabilities(make_beamsplitter(t).net);
        w.update(std::abs(probs.at("A") - born.at("A")));
        w.update(std::abs(probs.at("B") - born.at("B")));
    }
    return {1, "simple-model beamsplitter ratio equals T/R and Born probabilities",
            w.value < 1e-12, w.str()};
}

// 2. Improved-model theta-integral by quadrature agrees with the closed form
//    (ratio T/R) to 1e-9 across the grid.
inline CriterionResult criterion_improved_quadrature() {
    detail::Worst w;
    for (double t : detail::transmission_grid(0.05, 0.95, 0.05)) {
        BeamsplitterSpec spec(t);
        auto quad = model_improved::outcome_probabilities_improved_quadrature(spec);
        auto closed = model_improved::outcome_probabilities_improved(spec);
        w.update(std::abs(quad.at("A") - closed.at("A")));
        w.update(std::abs(quad.at("A") / quad.at("B") - t / (1.0 - t)) /
                 (t / (1.0 - t)));
    }
    return {2, "improved-model quadrature matches closed-form T/R ratio",
            w.value < 1e-9, w.str()};
}

// 3. Seeded Monte Carlo at T = 0.7, n = 1e6: weighted P(A) within 0.005 of
//    0.7 and reproducible.
inline CriterionResult criterion_monte_carlo() {
    BeamsplitterSpec spec(0.7);
    const std::uint64_t seed = 20240817;
    auto runs = model_improved::sample_runs(spec, 1000000, seed);
    auto summary = model_improved::summarize(runs);
    auto rerun = model_improved::sample_runs(spec, 1000000, seed);
    bool reproducible = runs.size() == rerun.size();
    for (std::size_t i = 0; reproducible && i < runs.size(); ++i)
        reproducible = runs[i].theta == rerun[i].theta &&
                       runs[i].weight == rerun[i].weight &&
                       runs[i].outcome == rerun[i].outcome;
    const double dev = std::abs(summary.p_a - 0.7);
    std::ostringstream os;
    os << "P(A) = " << summary.p_a << ", |dev| = " << dev
       << (reproducible ? ", reproducible" : ", NOT reproducible");
    return {3, "improved-model Monte Carlo converges (n = 1e6, seeded)",
            dev < 0.005 && reproducible, os.str()};
}

// 4. Correspondence: classical post-selected averages minus I_Z equal the
//    oracle weak values to 1e-12, both outcomes, across the grid.
inline CriterionResult criterion_weak_value_correspondence() {
    detail::Worst w;
    for (double t : detail::transmission_grid(0.05, 0.95, 0.05)) {
        BeamsplitterSpec spec(t);
        auto rep_a = averages::verify_weak_value_correspondence(spec, Outcome::A, 0.7);
        w.update(rep_a.residual_x);
        w.update(rep_a.residual_y);
        if (std::abs(t - 0.5) < 1e-9) continue;  // outcome B impossible
        const double floor = averages::background_floor(spec, Outcome::B);
        auto rep_b =
            averages::verify_weak_value_correspondence(spec, Outcome::B, floor + 1.0);
        w.update(rep_b.residual_x);
        w.update(rep_b.residual_y);
    }
    return {4, "post-selected averages minus I_Z equal oracle weak values",
            w.value < 1e-12, w.str()};
}

// 5. Negative weak value at T = 0.6, outcome B, and the non-negativity floor
//    sqrt(R)/(sqrt(T)-sqrt(R)) recovered by bisection.
inline CriterionResult criterion_negative_weak_value() {
    BeamsplitterSpec spec(0.6);
    InterferometerExperiment exp = make_interferometer(0.6);
    oracle::Cut cut{{exp.edge_x, "X"}, {exp.edge_y, "Y"}};
    auto pre = oracle::forward_state(exp.net, cut);
    auto post = oracle::backward_state(exp.net, "B", cut);
    const double weak_iy = oracle::weak_value(pre, post, oracle::Projector{"Y"});

    const double st = std::sqrt(0.6), sr = std::sqrt(0.4);
    const double floor_formula = sr / (st - sr);
    const double floor_bisect = bisect_threshold(
        [&](double iz) {
            try {
                auto [ix, iy] = averages::average_intermediate_intensities(
                    spec, Outcome::B, iz);
                return ix >= 0.0 && iy >= 0.0;
            } catch (const InsufficientBackgroundError&) {
                return false;
            }
        },
        0.0, 100.0, 1e-10);

    bool ok = weak_iy < 0.0 && std::abs(floor_formula - floor_bisect) < 1e-8 &&
              floor_formula + weak_iy > -1e-9;  // average exactly zero at the floor
    std::ostringstream os;
    os << "weak I_Y = " << weak_iy << ", floor(formula) = " << floor_formula
       << ", floor(bisection) = " << floor_bisect;
    return {5, "negative weak value at T = 0.6 with non-negativity floor", ok, os.str()};
}

// 6. Tuned interferometer: P(A) = 1, P(B) = 0, and outcome-B queries raise
//    the divergence error.
inline CriterionResult criterion_tuned_interferometer() {
    BeamsplitterSpec spec(0.5);
    auto probs = model_improved::interferometer_probabilities_improved(spec);
    auto born = oracle::born_probabilities(make_interferometer(0.5).net);
    bool diverges = false;
    try {
        averages::required_correlation_interferometer(spec, Outcome::B);
    } catch (const DivergenceError&) {
        diverges = true;
    }
    bool ok = std::abs(probs.at("A") - 1.0) < 1e-12 && probs.at("B") < 1e-12 &&
              std::abs(born.at("A") - 1.0) < 1e-12 && diverges;
    std::ostringstream os;
    os << "P(A) = " << probs.at("A") << ", Born P(A) = " << born.at("A")
       << ", divergence error " << (diverges ? "raised" : "MISSING");
    return {6, "tuned interferometer: certain A, divergent outcome-B correlation",
            ok, os.str()};
}

// 7. Cascade: improved model equals Born probabilities on the (T1, T2) grid
//    to 1e-12 while the simple-model extension fails by more than 0.01.
inline CriterionResult criterion_cascade() {
    detail::Worst improved_dev, simple_dev;
    for (double t1 : detail::transmission_grid(0.1, 0.9, 0.1)) {
        for (double t2 : detail::transmission_grid(0.1, 0.9, 0.1)) {
            auto improved = model_improved::cascade_probabilities({t1, t2});
            auto naive = model_simple::cascade_probabilities_simple({t1, t2});
            auto born = oracle::born_probabilities(make_cascade({t1, t2}).net);
            for (const auto& [label, p] : born) {
                improved_dev.update(std::abs(improved.at(label) - p));
                simple_dev.update(std::abs(naive.at(label) - p));
            }
        }
    }
    bool ok = improved_dev.value < 1e-12 && simple_dev.value > 0.01;
    std::ostringstream os;
    os << "improved max dev " << improved_dev.value << ", simple-model max dev "
       << simple_dev.value << " (must exceed 0.01: documented failure)";
    return {7, "cascade: improved model matches Born, simple model fails", ok, os.str()};
}

// 8. Entangled pair: joint table equals the quantum cos^2/sin^2 values for
//    100 random settings, and CHSH at the optimal angles equals 2 sqrt(2).
inline CriterionResult criterion_entangled_pair() {
    detail::Worst w;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int i = 0; i < 100; ++i) {
        const double a = angle(rng), b = angle(rng);
        auto table = model_simple::entangled_joint_probabilities(a, b);
        const double c = std::cos(a - b), s = std::sin(a - b);
        w.update(std::abs(table.pp - 0.5 * c * c));
        w.update(std::abs(table.mm - 0.5 * c * c));
        w.update(std::abs(table.pm - 0.5 * s * s));
        w.update(std::abs(table.mp - 0.5 * s * s));
    }
    const double s_chsh =
        model_simple::chsh_statistic(0.0, M_PI / 4.0, M_PI / 8.0, 3.0 * M_PI / 8.0);
    const double chsh_dev = std::abs(s_chsh - 2.0 * std::sqrt(2.0));
    bool ok = w.value < 1e-12 && chsh_dev < 1e-9;
    std::ostringstream os;
    os << w.str() << ", CHSH = " << s_chsh;
    return {8, "entangled pair joint table and CHSH = 2 sqrt(2)", ok, os.str()};
}

// 9. Conservation and normalization: 1e4 random propagations conserve energy
//    to 1e-12; probability maps sum to 1; complete weak values sum to 1.
inline CriterionResult criterion_conservation() {
    detail::Worst w;
    std::mt19937_64 rng(90210);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<int> depth_dist(1, 4);
    for (int i = 0; i < 10000; ++i) {
        const int depth = depth_dist(rng);
        std::vector<double> ts;
        for (int d = 0; d < depth; ++d) ts.push_back(uni(rng));
        CascadeExperiment exp = make_cascade(ts);
        std::map<int, ComplexAmplitude> inputs;
        for (int src : exp.net.source_elements()) {
            const Element& el = exp.net.elements()[src];
            inputs[src] = el.dark ? ComplexAmplitude(0.5 * uni(rng), 0.5 * uni(rng))
                                  : std::polar(1.0, 2.0 * M_PI * uni(rng));
        }
        w.update(check_energy_conservation(propagate(exp.net, inputs)));
    }
    detail::Worst sums;
    for (double t : detail::transmission_grid(0.05, 0.95, 0.05)) {
        BeamsplitterSpec spec(t);
        auto sum_of = [](const std::map<std::string, double>& m) {
            double s = 0.0;
            for (const auto& [k, v] : m) s += v;
            return s;
        };
        sums.update(std::abs(sum_of(model_simple::outcome_probabilities_simple(spec)) - 1.0));
        sums.update(std::abs(sum_of(model_improved::outcome_probabilities_improved(spec)) - 1.0));
        sums.update(std::abs(sum_of(model_improved::interferometer_probabilities_improved(spec)) - 1.0));
        sums.update(std::abs(sum_of(model_improved::cascade_probabilities({t, 0.3})) - 1.0));

        InterferometerExperiment exp = make_interferometer(t);
        oracle::Cut cut{{exp.edge_x, "X"}, {exp.edge_y, "Y"}};
        auto pre = oracle::forward_state(exp.net, cut);
        auto post = oracle::backward_state(exp.net, "A", cut);
        const double total = oracle::weak_value(pre, post, oracle::Projector{"X"}) +
                             oracle::weak_value(pre, post, oracle::Projector{"Y"});
        sums.update(std::abs(total - 1.0));
    }
    bool ok = w.value < 1e-12 && sums.value < 1e-9;
    std::ostringstream os;
    os << "energy residual " << w.value << ", normalization deviation " << sums.value;
    return {9, "energy conservation and probability normalization", ok, os.str()};
}

inline std::vector<CriterionResult> run_all() {
    return {criterion_simple_ratio(),
            criterion_improved_quadrature(),
            criterion_monte_carlo(),
            criterion_weak_value_correspondence(),
            criterion_negative_weak_value(),
            criterion_tuned_interferometer(),
            criterion_cascade(),
            criterion_entangled_pair(),
            criterion_conservation()};
}

}  // namespace cpa::verify
