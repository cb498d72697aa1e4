#pragma once

#include <vector>

#include "breather/field.hpp"

namespace breather {

// The five temporal symmetry classes. Index sets:
//   1: Z      (real signal, no further constraint)
//   2: Z      (even in t: v_k real, v_k = v_{-k})
//   3: Z\{0}  (odd in t: v_k purely imaginary, v_k = -v_{-k})
//   4: 2Z     (pi-periodic, even modes only)
//   5: 2Z+1   (pi-antiperiodic, odd modes only)
// Every class keeps v_{-k} = conj(v_k) so synthesized signals are real.
struct SymmetryClass {
    int index = 1;

    explicit SymmetryClass(int s = 1) : index(s) {
        if (s < 1 || s > 5) throw ConfigError("symmetry class must be in 1..5, got " + std::to_string(s));
    }

    bool contains(int k) const {
        switch (index) {
            case 1:
            case 2: return true;
            case 3: return k != 0;
            case 4: return k % 2 == 0;
            default: return k % 2 != 0;
        }
    }

    bool operator==(const SymmetryClass&) const = default;
};

// All admissible signed mode indices with |k| <= cutoff, ascending.
std::vector<int> mode_set(SymmetryClass sym, int cutoff);

// The stored half: admissible k in [0, cutoff], ascending.
std::vector<int> nonneg_mode_set(SymmetryClass sym, int cutoff);

}  // namespace breather
