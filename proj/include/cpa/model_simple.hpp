#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cpa/amplitude.hpp"
#include "cpa/errors.hpp"
#include "cpa/network.hpp"

// The first constrained-field model: a 1/sqrt(I) prior on each unknown
// intensity, the pairing constraint {I1, I2} = {IA, IB}, and closed-form
// diagram enumeration for a single beamsplitter.  Also the maximally
// entangled pair account, where the hidden polarization is forced onto one
// of the two future measurement axes.

namespace cpa::model_simple {

// Unnormalized prior density Q / sqrt(I) for I > epsilon.  All outputs of
// this module are ratios, so Q is never needed and epsilon only bounds the
// domain.
struct PriorSimple {
    double epsilon = 1e-9;

    double density(double i) const {
        if (!(epsilon > 0.0)) throw ValidationError("prior cutoff must be positive");
        if (i < epsilon)
            throw ValidationError("prior density undefined below the cutoff");
        return 1.0 / std::sqrt(i);
    }
};

// One complete all-at-once solution: hidden inputs (I1, I2), hidden outputs
// (IA, IB), the fired detector, and an unnormalized weight.  The fired
// detector receives intensity exactly 1 plus its hidden excess.
struct SimpleDiagram {
    Outcome outcome;
    double i1, i2, ia, ib;
    double weight;
};

// The two solutions of the single-splitter experiment.  The dark-port and
// no-excess intensities are hardened to exactly 0 (the epsilon -> 0 limit);
// the shared P0(~epsilon) factor cancels out of every ratio and is dropped
// from the weights.
inline std::vector<SimpleDiagram> solve_diagrams_beamsplitter(const BeamsplitterSpec& spec,
                                                              const PriorSimple& prior) {
    const double t = spec.transmission(), r = spec.reflection();
    if (spec.degenerate()) {
        // Only one outcome exists and no hidden boost is needed.
        SimpleDiagram d{t == 1.0 ? Outcome::A : Outcome::B, 0.0, 0.0, 0.0, 0.0, 1.0};
        return {d};
    }
    SimpleDiagram a{Outcome::A, r / t, 0.0, 0.0, r / t, prior.density(r / t)};
    SimpleDiagram b{Outcome::B, t / r, 0.0, t / r, 0.0, prior.density(t / r)};
    return {a, b};
}

// Normalized outcome probabilities; the ratio P(A)/P(B) = T/R exactly and is
// independent of epsilon and Q.
inline std::map<std::string, double> outcome_probabilities_simple(
    const BeamsplitterSpec& spec, const PriorSimple& prior = {}) {
    auto diagrams = solve_diagrams_beamsplitter(spec, prior);
    double total = 0.0;
    for (const auto& d : diagrams) total += d.weight;
    std::map<std::string, double> probs{{"A", 0.0}, {"B", 0.0}};
    for (const auto& d : diagrams) probs[to_string(d.outcome)] += d.weight / total;
    return probs;
}

// ---------------------------------------------------------------------------
// Entangled pair (two polarizing splitters at settings a and b).

// Joint outcome table for the four (+/-, +/-) detector combinations.
struct JointTable {
    double pp, pm, mp, mm;

    double correlation() const { return pp + mm - pm - mp; }
    double at(bool plus1, bool plus2) const {
        return plus1 ? (plus2 ? pp : pm) : (plus2 ? mp : mm);
    }
};

// Built constructively from the model: the hidden polarization lambda is
// constrained to {a, a+pi/2, b, b+pi/2} with equal branch weight 1/4; the
// matched photon's outcome is deterministic and the mismatched photon
// follows Malus's law at its splitter.
inline JointTable entangled_joint_probabilities(double a, double b) {
    JointTable t{0.0, 0.0, 0.0, 0.0};
    auto malus = [](double lambda, double setting) {
        double c = std::cos(lambda - setting);
        return c * c;  // P(+) at this splitter
    };
    struct Branch { double lambda; int matched; bool plus; };
    const std::array<Branch, 4> branches{{{a, 1, true},
                                          {a + M_PI / 2.0, 1, false},
                                          {b, 2, true},
                                          {b + M_PI / 2.0, 2, false}}};
    for (const Branch& br : branches) {
        if (br.matched == 1) {
            double p_plus2 = malus(br.lambda, b);
            (br.plus ? t.pp : t.mp) += 0.25 * p_plus2;
            (br.plus ? t.pm : t.mm) += 0.25 * (1.0 - p_plus2);
        } else {
            double p_plus1 = malus(br.lambda, a);
            (br.plus ? t.pp : t.pm) += 0.25 * p_plus1;
            (br.plus ? t.mp : t.mm) += 0.25 * (1.0 - p_plus1);
        }
    }
    return t;
}

// Standard CHSH combination S = E(a,b) - E(a,b') + E(a',b) + E(a',b') with
// correlators taken from the joint table.
inline double chsh_statistic(double a, double ap, double b, double bp) {
    auto e = [](double s1, double s2) {
        return entangled_joint_probabilities(s1, s2).correlation();
    };
    return e(a, b) - e(a, bp) + e(ap, b) + e(ap, bp);
}

// ---------------------------------------------------------------------------
// The documented failure case: the model does not extend to a cascade.
//
// The pairing constraint {inputs} = {outputs} is generically unsatisfiable
// once a second splitter is added, so this applies the remaining rules as
// directly as possible: dark ports stay empty, the fired detector must
// receive exactly one photon, so the boost solves f_d (1 + I1) = 1 where f_d
// is the classical fraction reaching detector d, and each outcome is
// weighted by P0 of the required boost.  The result demonstrably disagrees
// with the Born probabilities; tests pin that disagreement.
inline std::map<std::string, double> cascade_probabilities_simple(
    const std::vector<double>& transmissions, const PriorSimple& prior = {}) {
    if (transmissions.empty())
        throw ValidationError("cascade needs at least one beamsplitter");
    std::vector<double> fractions;
    double carry = 1.0;
    for (double t : transmissions) {
        BeamsplitterSpec spec(t);
        fractions.push_back(carry * spec.transmission());
        carry *= spec.reflection();
    }
    fractions.push_back(carry);

    std::map<std::string, double> probs;
    double total = 0.0;
    std::vector<double> weights;
    for (double f : fractions) {
        double boost = 1.0 / f - 1.0;  // required I1 so that f (1 + I1) = 1
        double w = boost < prior.epsilon ? 1.0 : prior.density(boost);
        weights.push_back(w);
        total += w;
    }
    for (std::size_t i = 0; i < fractions.size(); ++i)
        probs["D" + std::to_string(i + 1)] = weights[i] / total;
    return probs;
}

}  // namespace cpa::model_simple
