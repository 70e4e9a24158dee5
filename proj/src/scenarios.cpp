#include "kelly/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace kelly {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

void finish_scenarios(ScenarioSet& set) {
    set.per_asset_min.assign(set.n, 0.0);
    set.per_asset_max.assign(set.n, 0.0);
    for (std::size_t i = 0; i < set.n; ++i) {
        double lo = set.returns(0, i), hi = lo;
        for (std::size_t j = 1; j < set.m; ++j) {
            lo = std::min(lo, set.returns(j, i));
            hi = std::max(hi, set.returns(j, i));
        }
        set.per_asset_min[i] = lo;
        set.per_asset_max[i] = hi;
    }
}

}  // namespace

PriceTable load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_prices: cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("load_prices: empty file: " + path);
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2)
        throw std::invalid_argument("load_prices: header must name a date column and at least one ticker");

    PriceTable table;
    table.tickers.assign(header.begin() + 1, header.end());
    const std::size_t n = table.tickers.size();

    struct Row {
        std::string date;
        std::vector<double> prices;
    };
    std::vector<Row> rows;
    std::size_t row_index = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row_index;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != n + 1)
            throw std::invalid_argument("load_prices: ragged row " + std::to_string(row_index) +
                                        " (expected " + std::to_string(n + 1) + " fields, got " +
                                        std::to_string(fields.size()) + ")");
        Row row;
        row.date = fields[0];
        row.prices.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& cell = fields[i + 1];
            const std::string where =
                " at row " + std::to_string(row_index) + ", ticker " + table.tickers[i];
            if (cell.empty())
                throw std::invalid_argument("load_prices: missing price" + where);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw std::invalid_argument("load_prices: unparseable number '" + cell + "'" + where);
            if (!(value > 0.0))
                throw std::invalid_argument("load_prices: non-positive price" + where);
            row.prices[i] = value;
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2)
        throw std::invalid_argument("load_prices: need at least two price rows, got " +
                                    std::to_string(rows.size()));

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });

    table.prices = Matrix(rows.size(), n);
    table.dates.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        table.dates.push_back(rows[r].date);
        for (std::size_t i = 0; i < n; ++i) table.prices(r, i) = rows[r].prices[i];
    }
    return table;
}

ScenarioSet compute_returns(const PriceTable& prices) {
    if (prices.prices.rows() < 2)
        throw std::invalid_argument("compute_returns: need at least two price rows");
    ScenarioSet set;
    set.n = prices.prices.cols();
    set.m = prices.prices.rows() - 1;
    set.returns = Matrix(set.m, set.n);
    for (std::size_t j = 0; j < set.m; ++j)
        for (std::size_t i = 0; i < set.n; ++i)
            set.returns(j, i) =
                (prices.prices(j + 1, i) - prices.prices(j, i)) / prices.prices(j, i);
    set.nominal.assign(set.m, 1.0 / static_cast<double>(set.m));
    finish_scenarios(set);
    return set;
}

ScenarioSet make_scenarios(const Matrix& returns, const std::vector<double>* nominal) {
    if (returns.rows() == 0 || returns.cols() == 0)
        throw std::invalid_argument("make_scenarios: empty returns matrix");
    for (std::size_t j = 0; j < returns.rows(); ++j)
        for (std::size_t i = 0; i < returns.cols(); ++i)
            if (!(returns(j, i) > -1.0))
                throw std::invalid_argument("make_scenarios: return entry <= -1 at scenario " +
                                            std::to_string(j) + ", asset " + std::to_string(i));

    ScenarioSet set;
    set.m = returns.rows();
    set.n = returns.cols();
    set.returns = returns;
    if (nominal == nullptr) {
        set.nominal.assign(set.m, 1.0 / static_cast<double>(set.m));
    } else {
        if (nominal->size() != set.m)
            throw std::invalid_argument("make_scenarios: nominal length differs from scenario count");
        double sum = 0.0;
        for (double p : *nominal) {
            if (p < -1e-9) throw std::invalid_argument("make_scenarios: not a probability vector");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("make_scenarios: not a probability vector");
        set.nominal.resize(set.m);
        for (std::size_t j = 0; j < set.m; ++j)
            set.nominal[j] = std::max((*nominal)[j], 0.0) / sum;
    }
    finish_scenarios(set);
    return set;
}

Matrix fee_adjusted_returns(const ScenarioSet& scenarios, const std::vector<double>& costs,
                            const Weights& weights) {
    if (costs.size() != scenarios.n)
        throw std::invalid_argument("fee_adjusted_returns: cost vector length differs from asset count");
    if (weights.k.size() != scenarios.n)
        throw std::invalid_argument("fee_adjusted_returns: weight length differs from asset count");
    for (double c : costs)
        if (!(c >= 0.0 && c < 1.0))
            throw std::invalid_argument("fee_adjusted_returns: cost out of [0, 1)");

    Matrix adjusted = scenarios.returns;
    for (std::size_t i = 0; i < scenarios.n; ++i) {
        const double shift = weights.k[i] >= 0.0 ? -costs[i] : costs[i];
        for (std::size_t j = 0; j < scenarios.m; ++j) adjusted(j, i) += shift;
    }
    return adjusted;
}

}  // namespace kelly
