#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "cpa/amplitude.hpp"
#include "cpa/errors.hpp"
#include "cpa/network.hpp"
#include "cpa/oracle.hpp"

// Model-independent post-selected averages under the assumption that every
// unknown field component has the same ensemble mean I_Z: the required input
// correlation C = <sqrt((1+I1) I2) sin theta> per outcome, the average
// intermediate arm intensities of the equal-arm interferometer, and the
// check that those averages minus I_Z reproduce the quantum weak values.

namespace cpa::averages {

// Required correlation for the single-splitter experiment:
//   outcome A: C = -sqrt(R / 4T),  outcome B: C = sqrt(T / 4R).
inline double required_correlation_beamsplitter(const BeamsplitterSpec& spec,
                                                Outcome outcome) {
    const double t = spec.transmission(), r = spec.reflection();
    if (spec.degenerate())
        throw DivergenceError("required correlation diverges for a degenerate splitter");
    return outcome == Outcome::A ? -std::sqrt(r / (4.0 * t))
                                 : std::sqrt(t / (4.0 * r));
}

// Required correlation for the equal-arm interferometer (50/50 final
// splitter).  C_B diverges at T = 0.5, where outcome B has probability zero.
inline double required_correlation_interferometer(const BeamsplitterSpec& spec,
                                                  Outcome outcome) {
    const double t = spec.transmission(), r = spec.reflection();
    if (spec.degenerate())
        throw DivergenceError("interferometer needs a non-degenerate first splitter");
    if (t == r) {
        if (outcome == Outcome::B)
            throw DivergenceError("required correlation diverges: outcome B has zero "
                                  "probability at T = 0.5");
        return 0.0;  // finite limit of (0.5 - sqrt(RT))/(T - R) as T -> 1/2
    }
    const double rt = std::sqrt(r * t);
    return outcome == Outcome::A ? (0.5 - rt) / (t - r) : -(0.5 + rt) / (t - r);
}

// Average intermediate intensities (<I_X>, <I_Y>) on the interferometer arms
// given the fired detector and the background mean, computed from the
// required correlation:
//   <I_X> = I_Z + T - 2 sqrt(RT) C,   <I_Y> = I_Z + R + 2 sqrt(RT) C.
// Their sum is always 2 I_Z + 1.  Outcome B needs enough background to keep
// both arms non-negative; below that floor no classical solution exists.
inline std::pair<double, double> average_intermediate_intensities(
    const BeamsplitterSpec& spec, Outcome outcome, double i_z) {
    if (i_z < 0.0) throw ValidationError("background mean I_Z must be >= 0");
    const double t = spec.transmission(), r = spec.reflection();
    const double c = required_correlation_interferometer(spec, outcome);
    const double cross = 2.0 * std::sqrt(r * t) * c;
    const double ix = i_z + t - cross;
    const double iy = i_z + r + cross;
    if (ix < 0.0 || iy < 0.0)
        throw InsufficientBackgroundError(
            "no classical solution: I_Z = " + std::to_string(i_z) +
            " leaves a negative average arm intensity");
    return {ix, iy};
}

// Smallest I_Z keeping both post-selected arm averages non-negative; zero
// for outcome A.  For outcome B with T > R this is sqrt(R)/(sqrt(T)-sqrt(R))
// (mirror image when T < R), growing without bound as T -> 1/2.
inline double background_floor(const BeamsplitterSpec& spec, Outcome outcome) {
    const double t = spec.transmission(), r = spec.reflection();
    const double c = required_correlation_interferometer(spec, outcome);
    const double cross = 2.0 * std::sqrt(r * t) * c;
    return std::max({0.0, cross - t, -cross - r});
}

// Post-selected averages with the weak-value comparison spelled out.
struct AverageReport {
    Outcome outcome;
    double i_z;
    double c_required;
    double avg_i_x, avg_i_y;
    double weak_i_x, weak_i_y;
    double residual_x, residual_y;  // |(avg - I_Z) - weak|
};

// Computes (<I_X>, <I_Y>) from the correlation route and the weak values
// from the independent quantum oracle (forward/backward path states on a
// real interferometer network), then reports the residuals of
// <I_arm> - I_Z = weak value.
inline AverageReport verify_weak_value_correspondence(const BeamsplitterSpec& spec,
                                                      Outcome outcome, double i_z) {
    AverageReport rep{};
    rep.outcome = outcome;
    rep.i_z = i_z;
    rep.c_required = required_correlation_interferometer(spec, outcome);
    std::tie(rep.avg_i_x, rep.avg_i_y) =
        average_intermediate_intensities(spec, outcome, i_z);

    InterferometerExperiment exp = make_interferometer(spec.transmission());
    oracle::Cut cut{{exp.edge_x, "X"}, {exp.edge_y, "Y"}};
    oracle::PathState pre = oracle::forward_state(exp.net, cut);
    oracle::PathState post =
        oracle::backward_state(exp.net, to_string(outcome), cut);
    rep.weak_i_x = oracle::weak_value(pre, post, oracle::Projector{"X"});
    rep.weak_i_y = oracle::weak_value(pre, post, oracle::Projector{"Y"});

    rep.residual_x = std::abs((rep.avg_i_x - i_z) - rep.weak_i_x);
    rep.residual_y = std::abs((rep.avg_i_y - i_z) - rep.weak_i_y);
    return rep;
}

}  // namespace cpa::averages
