#pragma once

#include <cmath>
#include <complex>

#include "cpa/errors.hpp"

namespace cpa {

// Classical mode amplitude.  Intensity |a|^2 = 1 corresponds to exactly one
// classical photon analog (total energy hbar*omega at peak intensity 1).
using ComplexAmplitude = std::complex<double>;

inline double intensity(const ComplexAmplitude& a) { return std::norm(a); }

// Lossless beamsplitter with transmission T and reflection R = 1 - T.
// R is always derived, never stored, so T + R = 1 holds exactly.
class BeamsplitterSpec {
public:
    explicit BeamsplitterSpec(double transmission) : t_(transmission) {
        if (!(transmission >= 0.0 && transmission <= 1.0)) {
            throw ValidationError("beamsplitter transmission must lie in [0, 1], got " +
                                  std::to_string(transmission));
        }
    }

    double transmission() const { return t_; }
    double reflection() const { return 1.0 - t_; }

    // T = 0 or T = 1: only one outcome is possible.
    bool degenerate() const { return t_ == 0.0 || t_ == 1.0; }

private:
    double t_;
};

// Which detector fired in a two-output experiment.
enum class Outcome { A, B };

inline const char* to_string(Outcome o) { return o == Outcome::A ? "A" : "B"; }

}  // namespace cpa
