#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cpa/amplitude.hpp"
#include "cpa/errors.hpp"
#include "cpa/quadrature.hpp"

// The second constrained-field model: all four hidden intensities equal one
// background value I_Z on every run, which ties I_Z to the relative input
// phase theta.  Outcome ratios follow from a 1/sqrt(I_Z^2 + I_Z) prior
// integrated over the theta half-range where each outcome has a solution.

namespace cpa::model_improved {

// Unnormalized prior density 1 / sqrt(I^2 + I), strictly decreasing and
// divergent at 0.  Ratios never need the normalization; epsilon is only a
// cutoff for density plotting.
struct ImprovedPrior {
    double epsilon = 0.0;

    double density(double iz) const {
        if (!(iz > 0.0)) throw ValidationError("background intensity must be positive");
        if (std::isinf(iz)) return 0.0;
        return 1.0 / std::sqrt(iz * iz + iz);
    }
};

// On-shell background intensity for a given phase and outcome: the unique
// positive root of 1/sqrt(I^2 + I) = k, with
//   k = -sin(theta) sqrt(4T/R)   (outcome A, needs sin(theta) < 0)
//   k =  sin(theta) sqrt(4R/T)   (outcome B, needs sin(theta) > 0)
inline double iz_for_outcome(double theta, const BeamsplitterSpec& spec, Outcome outcome) {
    const double t = spec.transmission(), r = spec.reflection();
    if (spec.degenerate())
        throw ValidationError("degenerate splitter has no hidden-field solution");
    const double s = std::sin(theta);
    double k;
    if (outcome == Outcome::A) {
        if (!(s < 0.0))
            throw NoSolutionError("outcome A requires sin(theta) < 0");
        k = -s * std::sqrt(4.0 * t / r);
    } else {
        if (!(s > 0.0))
            throw NoSolutionError("outcome B requires sin(theta) > 0");
        k = s * std::sqrt(4.0 * r / t);
    }
    // I^2 + I = 1/k^2  =>  I = (-1 + sqrt(1 + 4/k^2)) / 2
    return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 / (k * k)));
}

// Closed-form outcome probabilities: the theta-integral of the on-shell
// prior collapses to |sin(theta)| sqrt(4T/R) (resp. sqrt(4R/T)), so
// P(A)/P(B) = T/R.
inline std::map<std::string, double> outcome_probabilities_improved(
    const BeamsplitterSpec& spec) {
    const double t = spec.transmission();
    return {{"A", t}, {"B", 1.0 - t}};
}

// The same probabilities by adaptive quadrature of P0(I_Z(theta)) over each
// outcome's theta half-range.  Kept as an independent route; must agree with
// the closed form to 1e-9.
inline std::map<std::string, double> outcome_probabilities_improved_quadrature(
    const BeamsplitterSpec& spec, double tol = 1e-12) {
    if (spec.degenerate()) return outcome_probabilities_improved(spec);
    ImprovedPrior prior;
    auto weight = [&](Outcome o) {
        const double lo = o == Outcome::A ? M_PI : 0.0;
        auto f = [&](double theta) {
            const double s = std::sin(theta);
            // Endpoints: I_Z diverges and the density vanishes.  Rounded
            // endpoints (sin(pi) != 0 in floats) land on the wrong sign.
            if (o == Outcome::A ? s >= 0.0 : s <= 0.0) return 0.0;
            return prior.density(iz_for_outcome(theta, spec, o));
        };
        return integrate(f, lo, lo + M_PI, tol);
    };
    const double wa = weight(Outcome::A), wb = weight(Outcome::B);
    return {{"A", wa / (wa + wb)}, {"B", wb / (wa + wb)}};
}

// One Monte Carlo realization: a phase, its on-shell background intensity,
// the implied outcome and the importance weight P0(I_Z).
struct RunRecord {
    double theta;
    double i_z;
    Outcome outcome;
    double weight;
};

namespace detail {

// splitmix64; each record gets its own stream keyed by (seed, index) so that
// parallel generation is bitwise identical to sequential generation.
struct Splitmix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }
};

inline Splitmix64 stream_for(std::uint64_t seed, std::uint64_t index) {
    Splitmix64 mix{seed ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL)};
    mix.next();  // decorrelate nearby indices
    return mix;
}

}  // namespace detail

// Seeded, reproducible sampler: theta uniform on [0, 2pi), importance weight
// P0(I_Z on shell).  Weighted outcome frequencies converge to the analytic
// probabilities at the usual 1/sqrt(n) rate.
inline std::vector<RunRecord> sample_runs(const BeamsplitterSpec& spec, std::size_t n,
                                          std::uint64_t seed) {
    if (n == 0) throw ValidationError("sample_runs requires n >= 1");
    if (spec.degenerate())
        throw ValidationError("degenerate splitter cannot be sampled");
    ImprovedPrior prior;
    std::vector<RunRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto rng = detail::stream_for(seed, i);
        double theta, s;
        do {
            theta = 2.0 * M_PI * rng.uniform01();
            s = std::sin(theta);
        } while (s == 0.0);  // measure-zero boundary, rejected
        const Outcome o = s < 0.0 ? Outcome::A : Outcome::B;
        const double iz = iz_for_outcome(theta, spec, o);
        out.push_back(RunRecord{theta, iz, o, prior.density(iz)});
    }
    return out;
}

// Weighted outcome frequencies and their standard error.
struct SampleSummary {
    std::size_t n;
    double p_a;
    double standard_error;
};

inline SampleSummary summarize(const std::vector<RunRecord>& runs) {
    double total = 0.0, wa = 0.0, w2 = 0.0;
    for (const RunRecord& r : runs) {
        total += r.weight;
        w2 += r.weight * r.weight;
        if (r.outcome == Outcome::A) wa += r.weight;
    }
    const double p = wa / total;
    // effective sample size for weighted frequencies
    const double n_eff = total * total / w2;
    return {runs.size(), p, std::sqrt(p * (1.0 - p) / n_eff)};
}

// Figure-2 cascade: equal hidden intensities factor the problem into
// consecutive single-splitter problems, so branch probabilities multiply.
inline std::map<std::string, double> cascade_probabilities(
    const std::vector<double>& transmissions) {
    if (transmissions.empty())
        throw ValidationError("cascade needs at least one beamsplitter");
    std::map<std::string, double> probs;
    double carry = 1.0;
    std::size_t i = 0;
    for (double t : transmissions) {
        BeamsplitterSpec stage(t);
        // Each stage's branching ratio is this model's single-splitter result.
        auto stage_probs = stage.degenerate()
                               ? std::map<std::string, double>{{"A", t}, {"B", 1.0 - t}}
                               : outcome_probabilities_improved(stage);
        probs["D" + std::to_string(++i)] = carry * stage_probs.at("A");
        carry *= stage_probs.at("B");
    }
    probs["D" + std::to_string(++i)] = carry;
    return probs;
}

// Equal-arm interferometer with a 50/50 final splitter: outcome weights are
// 1/|C| with the required correlations C_A = (0.5 - sqrt(RT))/(T - R) and
// C_B = -(0.5 + sqrt(RT))/(T - R).  At T = 0.5, C_B diverges and outcome B
// never occurs.
inline std::map<std::string, double> interferometer_probabilities_improved(
    const BeamsplitterSpec& first) {
    const double t = first.transmission(), r = first.reflection();
    if (first.degenerate())
        throw ValidationError("interferometer needs a non-degenerate first splitter");
    if (t == r) return {{"A", 1.0}, {"B", 0.0}};
    const double rt = std::sqrt(r * t);
    const double ca = (0.5 - rt) / (t - r);
    const double cb = -(0.5 + rt) / (t - r);
    const double wa = 1.0 / std::abs(ca), wb = 1.0 / std::abs(cb);
    return {{"A", wa / (wa + wb)}, {"B", wb / (wa + wb)}};
}

}  // namespace cpa::model_improved
