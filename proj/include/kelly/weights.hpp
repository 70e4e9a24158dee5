#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kelly {

// Portfolio weights: k[i] is the fraction of current wealth committed to
// asset i (negative = short). An optional long/short decomposition may be
// carried alongside; when present it must satisfy k_long >= 0, k_short <= 0
// and k = k_long + k_short componentwise.
struct Weights {
    std::vector<double> k;
    std::vector<double> k_long;   // empty when no split is carried
    std::vector<double> k_short;  // empty when no split is carried

    bool has_split() const { return !k_long.empty(); }

    void validate() const {
        if (k_long.size() != k_short.size())
            throw std::invalid_argument("weights: long/short split sizes differ");
        if (has_split()) {
            if (k_long.size() != k.size())
                throw std::invalid_argument("weights: split size differs from net size");
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (k_long[i] < 0.0)
                    throw std::invalid_argument("weights: negative long leg");
                if (k_short[i] > 0.0)
                    throw std::invalid_argument("weights: positive short leg");
                const double net = k_long[i] + k_short[i];
                if (std::abs(net - k[i]) > 1e-12)
                    throw std::invalid_argument("weights: split does not sum to net weight");
            }
        }
    }
};

}  // namespace kelly
