#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "cpa/field_core.hpp"
#include "cpa/network.hpp"

// Standard-quantum calculator over path labels, used as ground truth for the
// classical-field models.  It deliberately shares beamsplitter_transfer with
// field-core so both sides use one phase convention.

namespace cpa::oracle {

// A labeled edge of the cut at which a path state is evaluated.
struct CutEdge {
    int edge;
    std::string label;
};
using Cut = std::vector<CutEdge>;

struct PathState {
    std::vector<std::string> labels;
    std::vector<ComplexAmplitude> amplitudes;

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += intensity(a);
        return s;
    }

    ComplexAmplitude amplitude(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return amplitudes[i];
        throw ValidationError("path state has no label '" + label + "'");
    }

    void normalize() {
        double n = std::sqrt(norm2());
        if (n < 1e-15) throw PhysicsError("cannot normalize a null path state");
        for (auto& a : amplitudes) a /= n;
    }
};

// Rank-one path projector |label><label|.
struct Projector {
    std::string label;
};

// <phi|psi> with phi conjugated.
inline ComplexAmplitude overlap(const PathState& phi, const PathState& psi) {
    if (phi.labels != psi.labels)
        throw ValidationError("path states are indexed by different labels");
    ComplexAmplitude s(0.0, 0.0);
    for (std::size_t i = 0; i < phi.amplitudes.size(); ++i)
        s += std::conj(phi.amplitudes[i]) * psi.amplitudes[i];
    return s;
}

namespace detail {

// Every photon path (prepared source to detector) must cross the cut
// exactly once; vacuum dark ports carry no quantum amplitude.
inline void validate_cut(const OpticalNetwork& net, const Cut& cut) {
    if (cut.empty()) throw StructureError("cut is empty");
    for (const auto& path : net.all_paths(/*include_dark=*/false)) {
        int crossings = 0;
        for (int e : path)
            for (const CutEdge& c : cut)
                if (c.edge == e) ++crossings;
        if (crossings != 1)
            throw StructureError("cut must intersect every source-to-detector path "
                                 "exactly once (found " + std::to_string(crossings) + ")");
    }
}

inline int photon_source(const OpticalNetwork& net) {
    auto sources = net.source_elements(/*include_dark=*/false);
    if (sources.size() != 1)
        throw ValidationError("oracle requires exactly one prepared source");
    return sources.front();
}

}  // namespace detail

// Initial state evolved forward to the cut: amplitudes of the unit photon on
// the cut edges, normalized.
inline PathState forward_state(const OpticalNetwork& net, const Cut& cut) {
    detail::validate_cut(net, cut);
    int src = detail::photon_source(net);
    FieldConfiguration cfg = propagate(net, {{src, ComplexAmplitude(1.0, 0.0)}});
    PathState psi;
    for (const CutEdge& c : cut) {
        psi.labels.push_back(c.label);
        psi.amplitudes.push_back(cfg.at(c.edge));
    }
    psi.normalize();
    return psi;
}

// Detected state evolved backward to the cut.  Backward evolution conjugates
// the forward unitary, so a reflection acquires -pi/2: the amplitude on cut
// edge e is conj(<detector|U|e>), obtained by forward-propagating a unit seed
// on e and reading the detector edge.
inline PathState backward_state(const OpticalNetwork& net, const std::string& detector,
                                const Cut& cut) {
    detail::validate_cut(net, cut);
    int det_edge = net.detector_edge(detector);
    PathState phi;
    for (const CutEdge& c : cut) {
        std::map<int, ComplexAmplitude> seed;
        for (const CutEdge& other : cut)
            seed[other.edge] = ComplexAmplitude(other.edge == c.edge ? 1.0 : 0.0, 0.0);
        FieldConfiguration cfg = propagate_from(net, seed);
        phi.labels.push_back(c.label);
        phi.amplitudes.push_back(cfg.is_known(det_edge) ? std::conj(cfg.at(det_edge))
                                                        : ComplexAmplitude(0.0, 0.0));
    }
    phi.normalize();
    return phi;
}

// Born-rule detection probabilities |amplitude|^2 at each detector edge.
inline std::map<std::string, double> born_probabilities(const OpticalNetwork& net) {
    int src = detail::photon_source(net);
    FieldConfiguration cfg = propagate(net, {{src, ComplexAmplitude(1.0, 0.0)}});
    return detector_intensities(cfg);
}

// Re( <phi|Q|psi> / <phi|psi> ).  Throws PostSelectionError when the
// post-selected outcome has zero probability.
inline double weak_value(const PathState& pre, const PathState& post, const Projector& q) {
    ComplexAmplitude denom = overlap(post, pre);
    if (std::abs(denom) < 1e-12)
        throw PostSelectionError("post-selection impossible: <phi|psi> ~ 0");
    ComplexAmplitude num = std::conj(post.amplitude(q.label)) * pre.amplitude(q.label);
    return (num / denom).real();
}

}  // namespace cpa::oracle
