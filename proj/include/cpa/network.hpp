#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cpa/amplitude.hpp"
#include "cpa/errors.hpp"

namespace cpa {

// Directed acyclic network of sources, beamsplitters, phase shifters and
// detectors.  Edges connect one output port to one input port.  The builder
// API produces edges when an element is added and consumes them when a
// downstream element attaches, so construction order is already a valid
// topological order; topological_order() still verifies acyclicity so that
// hand-assembled graphs are caught.

enum class ElementKind { Source, Beamsplitter, PhaseShifter, Detector };

struct Element {
    ElementKind kind;
    double transmission = 0.0;     // Beamsplitter
    double phase = 0.0;            // PhaseShifter
    std::string label;             // Detector
    bool dark = false;             // Source implicitly fed by vacuum
    std::array<int, 2> in{-1, -1};
    std::array<int, 2> out{-1, -1};

    int num_inputs() const {
        switch (kind) {
            case ElementKind::Source: return 0;
            case ElementKind::Beamsplitter: return 2;
            default: return 1;
        }
    }
    int num_outputs() const {
        switch (kind) {
            case ElementKind::Detector: return 0;
            case ElementKind::Beamsplitter: return 2;
            default: return 1;
        }
    }
};

struct Edge {
    int from_element = -1;  // producer
    int to_element = -1;    // consumer, -1 while dangling
};

class OpticalNetwork {
public:
    // Returns the id of the source's output edge.  The source element id is
    // the producer of that edge.
    int add_source() { return add_source_impl(false); }

    // A dark port: an input nobody prepares.  Defaults to amplitude 0 during
    // propagation and need not appear in the input assignment.
    int add_dark_source() { return add_source_impl(true); }

    // Consumes two dangling edges, returns (out1, out2).
    // Convention: out1 = sqrt(T) in1 + i sqrt(R) in2,
    //             out2 = i sqrt(R) in1 + sqrt(T) in2.
    std::pair<int, int> add_beamsplitter(int in1, int in2, double transmission) {
        BeamsplitterSpec check(transmission);  // validates range
        int id = static_cast<int>(elements_.size());
        Element e{ElementKind::Beamsplitter};
        e.transmission = transmission;
        e.in = {consume(in1, id), consume(in2, id)};
        e.out = {new_edge(id), new_edge(id)};
        elements_.push_back(e);
        return {e.out[0], e.out[1]};
    }

    int add_phase_shifter(int in, double phi) {
        int id = static_cast<int>(elements_.size());
        Element e{ElementKind::PhaseShifter};
        e.phase = phi;
        e.in = {consume(in, id), -1};
        e.out = {new_edge(id), -1};
        elements_.push_back(e);
        return e.out[0];
    }

    void add_detector(int in, std::string label) {
        int id = static_cast<int>(elements_.size());
        Element e{ElementKind::Detector};
        e.label = std::move(label);
        e.in = {consume(in, id), -1};
        elements_.push_back(e);
    }

    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Mutable access for low-level graph surgery (serialization, tests).
    std::vector<Element>& elements_mutable() { return elements_; }
    std::vector<Edge>& edges_mutable() { return edges_; }

    std::size_t num_edges() const { return edges_.size(); }

    int detector_element(const std::string& label) const {
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (elements_[i].kind == ElementKind::Detector && elements_[i].label == label)
                return static_cast<int>(i);
        }
        throw ValidationError("no detector labeled '" + label + "'");
    }

    int detector_edge(const std::string& label) const {
        return elements_[detector_element(label)].in[0];
    }

    std::vector<std::string> detector_labels() const {
        std::vector<std::string> out;
        for (const auto& e : elements_)
            if (e.kind == ElementKind::Detector) out.push_back(e.label);
        return out;
    }

    std::vector<int> source_elements(bool include_dark = true) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (elements_[i].kind == ElementKind::Source &&
                (include_dark || !elements_[i].dark))
                out.push_back(static_cast<int>(i));
        }
        return out;
    }

    // Structural invariants: port arities, every edge wired at both ends.
    void validate() const {
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            if (e.from_element < 0)
                throw StructureError("edge " + std::to_string(i) + " has no producer");
            if (e.to_element < 0)
                throw StructureError("edge " + std::to_string(i) + " is dangling (no consumer)");
        }
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            const Element& el = elements_[i];
            for (int p = 0; p < el.num_inputs(); ++p)
                if (el.in[p] < 0)
                    throw StructureError("element " + std::to_string(i) + " missing input port");
            for (int p = 0; p < el.num_outputs(); ++p)
                if (el.out[p] < 0)
                    throw StructureError("element " + std::to_string(i) + " missing output port");
        }
    }

    // Kahn's algorithm over elements; throws on a cycle.
    std::vector<int> topological_order() const {
        std::vector<int> indegree(elements_.size(), 0);
        for (const Edge& e : edges_)
            if (e.to_element >= 0) ++indegree[e.to_element];

        std::vector<int> ready, order;
        for (std::size_t i = 0; i < elements_.size(); ++i)
            if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
        while (!ready.empty()) {
            int el = ready.back();
            ready.pop_back();
            order.push_back(el);
            for (int p = 0; p < elements_[el].num_outputs(); ++p) {
                int edge = elements_[el].out[p];
                if (edge < 0) continue;
                int to = edges_[edge].to_element;
                if (to >= 0 && --indegree[to] == 0) ready.push_back(to);
            }
        }
        if (order.size() != elements_.size())
            throw StructureError("network graph contains a cycle");
        return order;
    }

    // Every simple source-to-detector path, as a list of edge ids.
    std::vector<std::vector<int>> all_paths(bool include_dark = true) const {
        std::vector<std::vector<int>> paths;
        std::vector<int> current;
        for (int src : source_elements(include_dark))
            walk(elements_[src].out[0], current, paths);
        return paths;
    }

private:
    int add_source_impl(bool dark) {
        int id = static_cast<int>(elements_.size());
        Element e{ElementKind::Source};
        e.dark = dark;
        e.out = {new_edge(id), -1};
        elements_.push_back(e);
        return e.out[0];
    }

    int new_edge(int from) {
        edges_.push_back(Edge{from, -1});
        return static_cast<int>(edges_.size()) - 1;
    }

    int consume(int edge, int by) {
        if (edge < 0 || edge >= static_cast<int>(edges_.size()))
            throw StructureError("unknown edge id " + std::to_string(edge));
        if (edges_[edge].to_element >= 0)
            throw StructureError("edge " + std::to_string(edge) + " already consumed");
        edges_[edge].to_element = by;
        return edge;
    }

    void walk(int edge, std::vector<int>& current,
              std::vector<std::vector<int>>& paths) const {
        current.push_back(edge);
        const Element& next = elements_[edges_[edge].to_element];
        if (next.kind == ElementKind::Detector) {
            paths.push_back(current);
        } else {
            for (int p = 0; p < next.num_outputs(); ++p)
                walk(next.out[p], current, paths);
        }
        current.pop_back();
    }

    std::vector<Element> elements_;
    std::vector<Edge> edges_;
};

// ---------------------------------------------------------------------------
// Canonical geometries shared by the models, the oracle, the CLI and tests.

// One splitter, detectors A (transmission) and B (reflection).
struct BeamsplitterExperiment {
    OpticalNetwork net;
    int source_edge = -1;  // prepared input, port 1
    int dark_edge = -1;    // dark port, port 2
    int edge_a = -1;       // detector A input edge
    int edge_b = -1;
};

inline BeamsplitterExperiment make_beamsplitter(double transmission) {
    BeamsplitterExperiment x;
    x.source_edge = x.net.add_source();
    x.dark_edge = x.net.add_dark_source();
    auto [a, b] = x.net.add_beamsplitter(x.source_edge, x.dark_edge, transmission);
    x.edge_a = a;
    x.edge_b = b;
    x.net.add_detector(a, "A");
    x.net.add_detector(b, "B");
    return x;
}

// k splitters in series: detector D1 takes the transmission of splitter 1,
// the reflected beam feeds splitter 2, and so on; the last splitter feeds
// Dk (transmission) and Dk+1 (reflection).
struct CascadeExperiment {
    OpticalNetwork net;
    int source_edge = -1;
    std::vector<std::string> detectors;  // D1 .. D(k+1)
};

inline CascadeExperiment make_cascade(const std::vector<double>& transmissions) {
    if (transmissions.empty())
        throw ValidationError("cascade needs at least one beamsplitter");
    CascadeExperiment x;
    x.source_edge = x.net.add_source();
    int carry = x.source_edge;
    for (std::size_t i = 0; i < transmissions.size(); ++i) {
        int dark = x.net.add_dark_source();
        auto [t, r] = x.net.add_beamsplitter(carry, dark, transmissions[i]);
        std::string label = "D" + std::to_string(i + 1);
        x.net.add_detector(t, label);
        x.detectors.push_back(label);
        carry = r;
    }
    std::string last = "D" + std::to_string(transmissions.size() + 1);
    x.net.add_detector(carry, last);
    x.detectors.push_back(last);
    return x;
}

// Two-splitter interferometer with equal arms (an optional phase shifter on
// arm X covers unequal arms).  Arm X is the transmission of the first
// splitter; at the final splitter X reflects toward A and transmits toward B.
struct InterferometerExperiment {
    OpticalNetwork net;
    int source_edge = -1;
    int edge_x = -1;  // upper arm, at the cut between the splitters
    int edge_y = -1;  // lower arm
};

inline InterferometerExperiment make_interferometer(double first_transmission,
                                                    double arm_phase = 0.0,
                                                    double final_transmission = 0.5) {
    InterferometerExperiment x;
    x.source_edge = x.net.add_source();
    int dark = x.net.add_dark_source();
    auto [arm_x, arm_y] = x.net.add_beamsplitter(x.source_edge, dark, first_transmission);
    x.edge_x = arm_x;
    x.edge_y = arm_y;
    int into_final_x = arm_x;
    if (arm_phase != 0.0) into_final_x = x.net.add_phase_shifter(arm_x, arm_phase);
    auto [a, b] = x.net.add_beamsplitter(arm_y, into_final_x, final_transmission);
    x.net.add_detector(a, "A");
    x.net.add_detector(b, "B");
    return x;
}

}  // namespace cpa
