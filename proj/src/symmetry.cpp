#include "breather/symmetry.hpp"

namespace breather {

std::vector<int> mode_set(SymmetryClass sym, int cutoff) {
    if (cutoff < 0) throw ConfigError("mode cutoff must be nonnegative");
    std::vector<int> out;
    for (int k = -cutoff; k <= cutoff; ++k)
        if (sym.contains(k)) out.push_back(k);
    return out;
}

std::vector<int> nonneg_mode_set(SymmetryClass sym, int cutoff) {
    if (cutoff < 0) throw ConfigError("mode cutoff must be nonnegative");
    std::vector<int> out;
    for (int k = 0; k <= cutoff; ++k)
        if (sym.contains(k)) out.push_back(k);
    return out;
}

}  // namespace breather
