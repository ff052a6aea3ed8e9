#include <cmath>
#include <random>

#include <doctest.h>

#include "cpa/field_core.hpp"
#include "cpa/model_improved.hpp"
#include "cpa/oracle.hpp"

using namespace cpa;
namespace mi = cpa::model_improved;

TEST_CASE("on-shell background intensity") {
    SUBCASE("theta = 3pi/2, T = 0.5, outcome A") {
        const double iz = mi::iz_for_outcome(3.0 * M_PI / 2.0, BeamsplitterSpec(0.5),
                                             Outcome::A);
        CHECK(iz == doctest::Approx(0.5 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
    }
    SUBCASE("T = R symmetry between the outcomes") {
        const double iza = mi::iz_for_outcome(3.0 * M_PI / 2.0, BeamsplitterSpec(0.5),
                                              Outcome::A);
        const double izb = mi::iz_for_outcome(M_PI / 2.0, BeamsplitterSpec(0.5),
                                              Outcome::B);
        CHECK(iza == doctest::Approx(izb).epsilon(1e-14));
    }
    SUBCASE("diverges as sin(theta) -> 0") {
        const double iz = mi::iz_for_outcome(M_PI - 1e-7, BeamsplitterSpec(0.5),
                                             Outcome::B);
        CHECK(iz > 1e6);
    }
}

TEST_CASE("substituting the root back satisfies the on-shell condition") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = 0.05 + 0.9 * uni(rng);
        const bool outcome_a = uni(rng) < 0.5;
        const double theta = outcome_a ? M_PI + M_PI * (0.01 + 0.98 * uni(rng))
                                       : M_PI * (0.01 + 0.98 * uni(rng));
        const Outcome o = outcome_a ? Outcome::A : Outcome::B;
        const double iz = mi::iz_for_outcome(theta, BeamsplitterSpec(t), o);
        const double lhs = 1.0 / std::sqrt(iz * iz + iz);
        const double rhs = outcome_a
                               ? -std::sin(theta) * std::sqrt(4.0 * t / (1.0 - t))
                               : std::sin(theta) * std::sqrt(4.0 * (1.0 - t) / t);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, rhs));
    }
}

TEST_CASE("wrong half-range has no solution") {
    CHECK_THROWS_AS(mi::iz_for_outcome(M_PI / 2.0, BeamsplitterSpec(0.5), Outcome::A),
                    NoSolutionError);
    CHECK_THROWS_AS(mi::iz_for_outcome(3.0 * M_PI / 2.0, BeamsplitterSpec(0.5),
                                       Outcome::B),
                    NoSolutionError);
    CHECK_THROWS_AS(mi::iz_for_outcome(0.0, BeamsplitterSpec(0.5), Outcome::A),
                    NoSolutionError);
}

TEST_CASE("closed-form outcome probabilities") {
    for (double t : {0.7, 0.5, 0.9}) {
        auto p = mi::outcome_probabilities_improved(BeamsplitterSpec(t));
        CHECK(p.at("A") == doctest::Approx(t).epsilon(1e-14));
        CHECK(p.at("B") == doctest::Approx(1.0 - t).epsilon(1e-13));
    }
}

TEST_CASE("quadrature agrees with the closed form across the grid") {
    for (double t = 0.05; t < 0.951; t += 0.05) {
        auto quad = mi::outcome_probabilities_improved_quadrature(BeamsplitterSpec(t));
        auto closed = mi::outcome_probabilities_improved(BeamsplitterSpec(t));
        CHECK(std::abs(quad.at("A") - closed.at("A")) < 1e-9);
        CHECK(std::abs(quad.at("B") - closed.at("B")) < 1e-9);
    }
}

TEST_CASE("sampler contracts") {
    BeamsplitterSpec spec(0.7);
    SUBCASE("n = 0 is rejected") {
        CHECK_THROWS_AS(mi::sample_runs(spec, 0, 1), ValidationError);
    }
    SUBCASE("n = 1 yields one valid record") {
        auto runs = mi::sample_runs(spec, 1, 99);
        REQUIRE(runs.size() == 1);
        const auto& r = runs[0];
        CHECK(r.i_z > 0.0);
        CHECK(r.weight > 0.0);
        CHECK((r.outcome == Outcome::A ? std::sin(r.theta) < 0.0
                                       : std::sin(r.theta) > 0.0));
    }
    SUBCASE("same seed reproduces the record list exactly") {
        auto a = mi::sample_runs(spec, 5000, 1234);
        auto b = mi::sample_runs(spec, 5000, 1234);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].theta == b[i].theta);
            CHECK(a[i].i_z == b[i].i_z);
            CHECK(a[i].weight == b[i].weight);
            CHECK(a[i].outcome == b[i].outcome);
        }
    }
    SUBCASE("different seeds differ") {
        auto a = mi::sample_runs(spec, 10, 1);
        auto b = mi::sample_runs(spec, 10, 2);
        bool any_diff = false;
        for (std::size_t i = 0; i < a.size(); ++i)
            any_diff = any_diff || a[i].theta != b[i].theta;
        CHECK(any_diff);
    }
}

TEST_CASE("weighted frequencies converge to the analytic probabilities") {
    auto runs = mi::sample_runs(BeamsplitterSpec(0.7), 200000, 777);
    auto summary = mi::summarize(runs);
    CHECK(std::abs(summary.p_a - 0.7) < 4.0 * summary.standard_error);
    CHECK(std::abs(summary.p_a - 0.7) < 0.01);
}

TEST_CASE("records are on shell through field-core propagation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = 0.05 + 0.9 * uni(rng);
        auto runs = mi::sample_runs(BeamsplitterSpec(t), 1, 1000 + i);
        const auto& r = runs[0];
        auto exp = make_beamsplitter(t);
        std::map<int, ComplexAmplitude> inputs{
            {0, ComplexAmplitude(std::sqrt(1.0 + r.i_z), 0.0)},
            {1, std::polar(std::sqrt(r.i_z), r.theta)}};
        auto cfg = propagate(exp.net, inputs);
        auto det = detector_intensities(cfg);
        const double fired =
            r.outcome == Outcome::A ? det.at("A") : det.at("B");
        const double scale = 1.0 + r.i_z;
        CHECK(std::abs(fired - (1.0 + r.i_z)) < 1e-10 * scale);
        CHECK(check_energy_conservation(cfg) < 1e-10 * scale);
    }
}

TEST_CASE("cascade probabilities multiply branch fractions") {
    SUBCASE("[0.5, 0.5]") {
        auto p = mi::cascade_probabilities({0.5, 0.5});
        CHECK(p.at("D1") == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(p.at("D2") == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(p.at("D3") == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("[1.0]") {
        auto p = mi::cascade_probabilities({1.0});
        CHECK(p.at("D1") == 1.0);
        CHECK(p.at("D2") == 0.0);
    }
    SUBCASE("[0.7, 0.4]") {
        auto p = mi::cascade_probabilities({0.7, 0.4});
        CHECK(p.at("D1") == doctest::Approx(0.7).epsilon(1e-14));
        CHECK(p.at("D2") == doctest::Approx(0.12).epsilon(1e-14));
        CHECK(p.at("D3") == doctest::Approx(0.18).epsilon(1e-14));
    }
    SUBCASE("empty list is rejected") {
        CHECK_THROWS_AS(mi::cascade_probabilities({}), ValidationError);
    }
}

TEST_CASE("cascade matches the oracle across the two-splitter grid") {
    for (double t1 = 0.1; t1 < 0.91; t1 += 0.1) {
        for (double t2 = 0.1; t2 < 0.91; t2 += 0.1) {
            auto p = mi::cascade_probabilities({t1, t2});
            auto born = oracle::born_probabilities(make_cascade({t1, t2}).net);
            for (const auto& [label, prob] : born)
                CHECK(std::abs(p.at(label) - prob) < 1e-12);
        }
    }
}

TEST_CASE("interferometer probabilities from the 1/|C| rule") {
    SUBCASE("T = 0.7") {
        auto p = mi::interferometer_probabilities_improved(BeamsplitterSpec(0.7));
        CHECK(p.at("A") == doctest::Approx(0.5 + std::sqrt(0.21)).epsilon(1e-13));
        CHECK(p.at("B") == doctest::Approx(0.5 - std::sqrt(0.21)).epsilon(1e-11));
    }
    SUBCASE("T = 0.5: A is certain") {
        auto p = mi::interferometer_probabilities_improved(BeamsplitterSpec(0.5));
        CHECK(p.at("A") == 1.0);
        CHECK(p.at("B") == 0.0);
    }
    SUBCASE("T = 0.9") {
        auto p = mi::interferometer_probabilities_improved(BeamsplitterSpec(0.9));
        CHECK(p.at("A") == doctest::Approx(0.8).epsilon(1e-13));
        CHECK(p.at("B") == doctest::Approx(0.2).epsilon(1e-13));
    }
    SUBCASE("matches the oracle across the grid") {
        for (double t = 0.05; t < 0.951; t += 0.05) {
            auto p = mi::interferometer_probabilities_improved(BeamsplitterSpec(t));
            auto born = oracle::born_probabilities(make_interferometer(t).net);
            CHECK(std::abs(p.at("A") - born.at("A")) < 1e-12);
        }
    }
}
