#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "cpa/amplitude.hpp"
#include "cpa/network.hpp"

namespace cpa {

// 2x2 lossless transfer through a beamsplitter.  Reflection acquires a +pi/2
// phase in the forward time direction:
//   out1 = sqrt(T) in1 + i sqrt(R) in2
//   out2 = i sqrt(R) in1 + sqrt(T) in2
inline std::pair<ComplexAmplitude, ComplexAmplitude> beamsplitter_transfer(
    const ComplexAmplitude& in1, const ComplexAmplitude& in2,
    const BeamsplitterSpec& spec) {
    const double st = std::sqrt(spec.transmission());
    const double sr = std::sqrt(spec.reflection());
    const ComplexAmplitude isr(0.0, sr);
    return {st * in1 + isr * in2, isr * in1 + st * in2};
}

// Amplitudes on every edge of a network after propagation.
struct FieldConfiguration {
    const OpticalNetwork* net = nullptr;
    std::vector<ComplexAmplitude> edge_amplitudes;
    std::vector<char> known;  // partial propagations leave edges unknown

    const ComplexAmplitude& at(int edge) const { return edge_amplitudes[edge]; }
    double intensity_at(int edge) const { return intensity(edge_amplitudes[edge]); }
    bool is_known(int edge) const { return known[edge] != 0; }
};

namespace detail {

inline void apply_element(const OpticalNetwork& net, const Element& el,
                          FieldConfiguration& cfg) {
    switch (el.kind) {
        case ElementKind::Beamsplitter: {
            auto [o1, o2] = beamsplitter_transfer(cfg.edge_amplitudes[el.in[0]],
                                                  cfg.edge_amplitudes[el.in[1]],
                                                  BeamsplitterSpec(el.transmission));
            cfg.edge_amplitudes[el.out[0]] = o1;
            cfg.edge_amplitudes[el.out[1]] = o2;
            cfg.known[el.out[0]] = cfg.known[el.out[1]] = 1;
            break;
        }
        case ElementKind::PhaseShifter:
            cfg.edge_amplitudes[el.out[0]] =
                cfg.edge_amplitudes[el.in[0]] * std::polar(1.0, el.phase);
            cfg.known[el.out[0]] = 1;
            break;
        default:
            break;  // sources are seeded, detectors absorb
    }
}

}  // namespace detail

// Exact linear propagation in topological order.  `inputs` maps source
// element id -> amplitude; dark sources default to 0 and may be omitted.
inline FieldConfiguration propagate(const OpticalNetwork& net,
                                    const std::map<int, ComplexAmplitude>& inputs) {
    net.validate();
    FieldConfiguration cfg;
    cfg.net = &net;
    cfg.edge_amplitudes.assign(net.num_edges(), ComplexAmplitude(0.0, 0.0));
    cfg.known.assign(net.num_edges(), 0);

    for (int el : net.topological_order()) {
        const Element& e = net.elements()[el];
        if (e.kind == ElementKind::Source) {
            auto it = inputs.find(el);
            if (it == inputs.end()) {
                if (!e.dark)
                    throw ValidationError("source element " + std::to_string(el) +
                                          " has no assigned amplitude");
                cfg.edge_amplitudes[e.out[0]] = ComplexAmplitude(0.0, 0.0);
            } else {
                cfg.edge_amplitudes[e.out[0]] = it->second;
            }
            cfg.known[e.out[0]] = 1;
        } else {
            detail::apply_element(net, e, cfg);
        }
    }
    return cfg;
}

// Propagation seeded on interior edges instead of sources.  Elements whose
// inputs are not all known are skipped; unreached edges stay unknown.
inline FieldConfiguration propagate_from(const OpticalNetwork& net,
                                         const std::map<int, ComplexAmplitude>& seeds) {
    net.validate();
    FieldConfiguration cfg;
    cfg.net = &net;
    cfg.edge_amplitudes.assign(net.num_edges(), ComplexAmplitude(0.0, 0.0));
    cfg.known.assign(net.num_edges(), 0);
    for (const auto& [edge, amp] : seeds) {
        cfg.edge_amplitudes[edge] = amp;
        cfg.known[edge] = 1;
    }
    for (int el : net.topological_order()) {
        const Element& e = net.elements()[el];
        if (e.kind == ElementKind::Source) continue;
        bool inputs_known = true;
        for (int p = 0; p < e.num_inputs(); ++p)
            if (!cfg.known[e.in[p]]) inputs_known = false;
        bool outputs_seeded = false;
        for (int p = 0; p < e.num_outputs(); ++p)
            if (cfg.known[e.out[p]]) outputs_seeded = true;
        if (inputs_known && !outputs_seeded) detail::apply_element(net, e, cfg);
    }
    return cfg;
}

// |sum of source-edge intensities - sum of detector-edge intensities|.
// Pure diagnostic; a valid configuration returns < 1e-12.
inline double check_energy_conservation(const FieldConfiguration& cfg) {
    double in = 0.0, out = 0.0;
    const OpticalNetwork& net = *cfg.net;
    for (const Element& e : net.elements()) {
        if (e.kind == ElementKind::Source) in += cfg.intensity_at(e.out[0]);
        if (e.kind == ElementKind::Detector) out += cfg.intensity_at(e.in[0]);
    }
    return std::abs(in - out);
}

// Detector-edge intensities keyed by detector label.
inline std::map<std::string, double> detector_intensities(const FieldConfiguration& cfg) {
    std::map<std::string, double> out;
    for (const Element& e : cfg.net->elements())
        if (e.kind == ElementKind::Detector) out[e.label] = cfg.intensity_at(e.in[0]);
    return out;
}

}  // namespace cpa
