#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kelly/matrix.hpp"
#include "kelly/weights.hpp"

namespace kelly {

// Validated wide-format price history: one row per date, one column per
// asset, every price strictly positive, rows in ascending date order.
struct PriceTable {
    std::vector<std::string> dates;
    std::vector<std::string> tickers;
    Matrix prices;  // dates x tickers
};

// A finite return distribution: m joint scenarios over n assets with a
// nominal probability for each scenario. Per-asset extremes are cached for
// the survival constraint.
struct ScenarioSet {
    std::size_t n = 0;
    std::size_t m = 0;
    Matrix returns;  // m x n, every entry > -1
    std::vector<double> nominal;
    std::vector<double> per_asset_min;
    std::vector<double> per_asset_max;
};

// Parse a wide CSV (header `date,TICKER1,...`; one price row per date).
// Rows are sorted ascending by date label. Throws std::invalid_argument
// with row/ticker locations for missing, unparseable, or non-positive
// prices, ragged rows, or fewer than two data rows.
PriceTable load_prices(const std::string& path);

// Per-period simple returns (S(k+1) - S(k))/S(k); one scenario per period
// with a uniform nominal distribution.
ScenarioSet compute_returns(const PriceTable& prices);

// Direct construction from a returns matrix. nullptr nominal means uniform;
// a given nominal must lie on the probability simplex (tolerance 1e-9) and
// is renormalized exactly onto it.
ScenarioSet make_scenarios(const Matrix& returns, const std::vector<double>* nominal = nullptr);

// Sign-dependent cost adjustment: long positions give up the fee on the way
// up (X - c), shorts on the way down (X + c). Used only by the backtest; the
// optimizer always sees raw returns.
Matrix fee_adjusted_returns(const ScenarioSet& scenarios, const std::vector<double>& costs,
                            const Weights& weights);

}  // namespace kelly
