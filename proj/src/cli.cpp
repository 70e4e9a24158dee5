#include "kelly/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kelly/backtest.hpp"
#include "kelly/errors.hpp"
#include "kelly/hyperplane.hpp"
#include "kelly/robust.hpp"
#include "kelly/scenarios.hpp"

namespace kelly::cli {

namespace {

using nlohmann::json;

double as_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw std::invalid_argument(what + " must be a number");
    return j.get<double>();
}

std::vector<double> as_double_vector(const json& j, const std::string& what) {
    if (!j.is_array()) throw std::invalid_argument(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) throw std::invalid_argument(what + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Matrix as_matrix(const json& j, const std::string& what) {
    if (!j.is_array()) throw std::invalid_argument(what + " must be an array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    Matrix out;
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> row = as_double_vector(j[i], what + " row");
        if (i == 0) {
            cols = row.size();
            out = Matrix(rows, cols);
        } else if (row.size() != cols) {
            throw std::invalid_argument(what + " rows have inconsistent lengths");
        }
        for (std::size_t c = 0; c < cols; ++c) out(i, c) = row[c];
    }
    return out;
}

Broadcastable as_broadcastable(const json& j, const std::string& what) {
    Broadcastable b;
    if (j.is_number())
        b.scalar = j.get<double>();
    else if (j.is_array())
        b.vec = as_double_vector(j, what);
    else
        throw std::invalid_argument(what + " must be a number or an array of numbers");
    return b;
}

void parse_ambiguity(const json& j, RunConfig& cfg) {
    if (!j.is_object()) throw std::invalid_argument("ambiguity must be a JSON object");
    if (!j.contains("type") || !j.at("type").is_string())
        throw std::invalid_argument("ambiguity needs a string \"type\" (box or polyhedron)");
    const std::string type = j.at("type").get<std::string>();
    if (type == "box") {
        BoxConfig box;
        for (const auto& [key, value] : j.items()) {
            if (key == "type") continue;
            if (key == "nominal")
                box.nominal = as_double_vector(value, "ambiguity.nominal");
            else if (key == "radii")
                box.radii = as_double_vector(value, "ambiguity.radii");
            else if (key == "gamma")
                box.gamma = as_number(value, "ambiguity.gamma");
            else
                throw std::invalid_argument("unknown ambiguity field '" + key + "'");
        }
        if (box.radii.has_value() == box.gamma.has_value())
            throw std::invalid_argument("ambiguity: a box needs exactly one of radii or gamma");
        cfg.box = std::move(box);
    } else if (type == "polyhedron") {
        PolyConfig poly;
        for (const auto& [key, value] : j.items()) {
            if (key == "type") continue;
            if (key == "a0")
                poly.a0 = as_matrix(value, "ambiguity.a0");
            else if (key == "d0")
                poly.d0 = as_double_vector(value, "ambiguity.d0");
            else if (key == "a1")
                poly.a1 = as_matrix(value, "ambiguity.a1");
            else if (key == "d1")
                poly.d1 = as_double_vector(value, "ambiguity.d1");
            else if (key == "nominal")
                poly.nominal = as_double_vector(value, "ambiguity.nominal");
            else
                throw std::invalid_argument("unknown ambiguity field '" + key + "'");
        }
        if (poly.a0.rows() == 0 && poly.a1.rows() == 0)
            throw std::invalid_argument("ambiguity: a polyhedron needs at least one block");
        cfg.polyhedron = std::move(poly);
    } else {
        throw std::invalid_argument("ambiguity: unknown type '" + type + "'");
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
    if (!out.good()) throw std::invalid_argument("failed while writing: " + path);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

// JSON object with keys emitted in sorted order; all numbers go through
// format_number so reruns are byte-identical.
class JsonObject {
  public:
    void number(const std::string& key, double v) { fields_[key] = format_number(v); }
    void integer(const std::string& key, std::size_t v) { fields_[key] = std::to_string(v); }
    void text(const std::string& key, const std::string& v) { fields_[key] = quote(v); }
    void array(const std::string& key, const std::vector<double>& v) { fields_[key] = json_array(v); }
    void null(const std::string& key) { fields_[key] = "null"; }

    std::string str() const {
        std::string out = "{";
        bool first = true;
        for (const auto& [key, value] : fields_) {
            if (!first) out += ',';
            first = false;
            out += quote(key);
            out += ':';
            out += value;
        }
        out += '}';
        return out;
    }

  private:
    std::map<std::string, std::string> fields_;
};

Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end) {
    Matrix out(end - begin, m.cols());
    for (std::size_t i = begin; i < end; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i - begin, j) = m(i, j);
    return out;
}

Matrix returns_from_prices(const std::string& path) {
    return compute_returns(load_prices(path)).returns;
}

// In-sample scenario set: every period, or the first `split` periods when a
// split is configured; the ambiguity block's nominal (if any) replaces the
// uniform default.
ScenarioSet config_scenarios(const RunConfig& cfg, const Matrix& all_returns) {
    std::size_t m_in = all_returns.rows();
    if (cfg.split) {
        if (*cfg.split < 1 || *cfg.split >= all_returns.rows())
            throw std::invalid_argument(
                "split must lie between 1 and the period count minus 1");
        m_in = *cfg.split;
    }
    const std::vector<double>* nominal = nullptr;
    if (cfg.box && cfg.box->nominal) nominal = &*cfg.box->nominal;
    if (cfg.polyhedron && cfg.polyhedron->nominal) nominal = &*cfg.polyhedron->nominal;
    const Matrix in = slice_rows(all_returns, 0, m_in);
    return make_scenarios(in, nominal);
}

AmbiguitySet config_ambiguity(const RunConfig& cfg, const ScenarioSet& scenarios) {
    if (cfg.box) {
        const BoxSpec spec = cfg.box->gamma
                                 ? BoxSpec::relative(scenarios.nominal, *cfg.box->gamma)
                                 : BoxSpec::absolute(scenarios.nominal, *cfg.box->radii);
        return box_to_polyhedron(spec);
    }
    if (cfg.polyhedron)
        return AmbiguitySet(cfg.polyhedron->a0, cfg.polyhedron->d0, cfg.polyhedron->a1,
                            cfg.polyhedron->d1);
    throw std::invalid_argument("config is missing the ambiguity block");
}

TradingConstraints config_constraints(const RunConfig& cfg, std::size_t n) {
    TradingConstraints cons;
    cons.leverage = cfg.leverage;
    cons.k_min = cfg.k_min.realize(n, 0.0);
    cons.k_max = cfg.k_max.realize(n, cfg.leverage / static_cast<double>(n));
    return cons;
}

std::string solution_json(const RobustSolution& sol) {
    JsonObject o;
    o.integer("M", sol.hyperplanes_used.count());
    o.number("epsilon", sol.hyperplanes_used.epsilon);
    o.array("k", sol.weights.k);
    o.array("k_long", sol.weights.k_long);
    o.array("k_short", sol.weights.k_short);
    o.array("lambda", sol.lambda);
    o.number("lp_value", sol.lp_value);
    o.number("nominal_elg", sol.nominal_elg);
    o.text("status", lp::to_string(sol.status));
    o.array("v", sol.v);
    o.number("worst_case_elg", sol.worst_case_elg);
    return o.str();
}

std::string report_json(const BacktestReport& rep) {
    JsonObject o;
    o.number("avg_excess_return", rep.avg_excess_return);
    o.number("cumulative_return", rep.cumulative_return);
    o.number("log_growth", rep.log_growth);
    o.number("max_drawdown", rep.max_drawdown);
    if (rep.sharpe_n)
        o.number("sharpe_n", *rep.sharpe_n);
    else
        o.null("sharpe_n");
    o.number("std_excess", rep.std_excess);
    o.number("terminal_value", rep.terminal_value);
    return o.str();
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "k,V,Rp\n";
    for (std::size_t k = 0; k < traj.v.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_number(traj.v[k]);
        out += ',';
        if (k > 0) out += format_number(traj.period_returns[k - 1]);
        out += '\n';
    }
    return out;
}

int cmd_hyperplanes(double eps, double x_min, double x_max, const std::string& out_path) {
    const hyperplane::HyperplaneSet hs = hyperplane::generate(x_min, x_max, eps);
    std::string csv = "z,a,b\n";
    for (const hyperplane::Hyperplane& h : hs.planes) {
        csv += format_number(h.z);
        csv += ',';
        csv += format_number(h.a);
        csv += ',';
        csv += format_number(h.b);
        csv += '\n';
    }
    write_file(out_path, csv);
    JsonObject o;
    o.integer("M", hs.count());
    o.number("epsilon", hs.epsilon);
    o.number("x_max", hs.x_max);
    o.number("x_min", hs.x_min);
    std::cout << o.str() << "\n";
    return 0;
}

int cmd_optimize(const std::string& config_path, const std::string& out_path) {
    const RunConfig cfg = load_config(config_path);
    const Matrix all_returns = returns_from_prices(cfg.prices_path);
    const ScenarioSet scenarios = config_scenarios(cfg, all_returns);
    const AmbiguitySet ambiguity = config_ambiguity(cfg, scenarios);
    const TradingConstraints constraints = config_constraints(cfg, scenarios.n);
    const RobustSolution sol = solve_robust(scenarios, ambiguity, constraints, cfg.epsilon);

    write_file(out_path, solution_json(sol) + "\n");
    std::cout << "weights:";
    for (double k : sol.weights.k) std::cout << ' ' << format_number(k);
    std::cout << "\n";
    std::cout << "hyperplanes: " << sol.hyperplanes_used.count() << "\n";
    std::cout << "lp_value: " << format_number(sol.lp_value) << "\n";
    std::cout << "nominal_elg: " << format_number(sol.nominal_elg) << "\n";
    std::cout << "worst_case_elg: " << format_number(sol.worst_case_elg) << "\n";
    return 0;
}

int cmd_backtest(const std::string& config_path, const std::string& weights_path,
                 const std::string& prefix) {
    const RunConfig cfg = load_config(config_path);
    const Weights weights = load_weights(weights_path);
    const Matrix all_returns = returns_from_prices(cfg.prices_path);
    const std::size_t n = all_returns.cols();
    if (weights.k.size() != n)
        throw std::invalid_argument("weights length differs from the asset count");
    const std::vector<double> costs = cfg.costs.realize(n, 1e-4);

    std::vector<std::pair<std::string, Matrix>> segments;
    if (cfg.split) {
        if (*cfg.split < 1 || *cfg.split >= all_returns.rows())
            throw std::invalid_argument(
                "split must lie between 1 and the period count minus 1");
        segments.emplace_back(prefix + "_in", slice_rows(all_returns, 0, *cfg.split));
        segments.emplace_back(prefix + "_out",
                              slice_rows(all_returns, *cfg.split, all_returns.rows()));
    } else {
        segments.emplace_back(prefix, all_returns);
    }

    for (const auto& [name, returns] : segments) {
        const Trajectory traj = backtest::run(returns, weights, costs, cfg.initial_wealth);
        write_file(name + "_trajectory.csv", trajectory_csv(traj));
        const double per_period_rf =
            cfg.risk_free_total / static_cast<double>(returns.rows());
        const BacktestReport rep = backtest::report(traj, per_period_rf);
        write_file(name + "_report.json", report_json(rep) + "\n");
        std::cout << report_json(rep) << "\n";
    }
    return 0;
}

int cmd_worst_case(const std::string& config_path, const std::string& weights_path) {
    const RunConfig cfg = load_config(config_path);
    const Weights weights = load_weights(weights_path);
    const Matrix all_returns = returns_from_prices(cfg.prices_path);
    const ScenarioSet scenarios = config_scenarios(cfg, all_returns);
    const AmbiguitySet ambiguity = config_ambiguity(cfg, scenarios);
    const WorstCasePrimal wc = worst_case_elg(scenarios, ambiguity, weights);

    JsonObject o;
    o.array("p_star", wc.p_star);
    o.number("value", wc.value);
    std::cout << o.str() << "\n";
    return 0;
}

}  // namespace

std::vector<double> Broadcastable::realize(std::size_t n, double fallback) const {
    if (vec) {
        if (vec->size() != n)
            throw std::invalid_argument("config vector length differs from the asset count");
        return *vec;
    }
    return std::vector<double>(n, scalar.value_or(fallback));
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");

    RunConfig cfg;
    bool have_prices = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "prices_path") {
            if (!value.is_string())
                throw std::invalid_argument("prices_path must be a string");
            cfg.prices_path = value.get<std::string>();
            have_prices = true;
        } else if (key == "ambiguity") {
            parse_ambiguity(value, cfg);
        } else if (key == "epsilon") {
            cfg.epsilon = as_number(value, "epsilon");
        } else if (key == "leverage") {
            cfg.leverage = as_number(value, "leverage");
        } else if (key == "k_min") {
            cfg.k_min = as_broadcastable(value, "k_min");
        } else if (key == "k_max") {
            cfg.k_max = as_broadcastable(value, "k_max");
        } else if (key == "costs") {
            cfg.costs = as_broadcastable(value, "costs");
        } else if (key == "risk_free_total") {
            cfg.risk_free_total = as_number(value, "risk_free_total");
        } else if (key == "initial_wealth") {
            cfg.initial_wealth = as_number(value, "initial_wealth");
        } else if (key == "split") {
            if (!value.is_number_integer() || value.get<long long>() < 1)
                throw std::invalid_argument("split must be a positive integer");
            cfg.split = static_cast<std::size_t>(value.get<long long>());
        } else {
            throw std::invalid_argument("unknown config field '" + key + "'");
        }
    }
    if (!have_prices) throw std::invalid_argument("config is missing prices_path");

    const std::filesystem::path prices(cfg.prices_path);
    if (prices.is_relative())
        cfg.prices_path = (std::filesystem::path(path).parent_path() / prices).string();
    return cfg;
}

Weights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open weights file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("weights parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("k"))
        throw std::invalid_argument("weights file must be a JSON object with a \"k\" array");
    Weights w;
    w.k = as_double_vector(j.at("k"), "weights k");
    return w;
}

std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // collapse negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string json_array(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ',';
        out += format_number(xs[i]);
    }
    out += ']';
    return out;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Distributionally robust log-optimal portfolio toolkit"};
    app.require_subcommand(1);

    auto* hp = app.add_subcommand("hyperplanes",
                                  "Generate a tangent envelope of log(1+x) on an interval");
    double eps = 0.0, x_min = 0.0, x_max = 0.0;
    std::string hp_out = "hyperplanes.csv";
    hp->add_option("--eps", eps, "envelope accuracy, > 0")
        ->required()
        ->envname("ROBUST_KELLY_EPS");
    hp->add_option("--xmin", x_min, "left end of the interval, > -1")
        ->required()
        ->envname("ROBUST_KELLY_XMIN");
    hp->add_option("--xmax", x_max, "right end of the interval")
        ->required()
        ->envname("ROBUST_KELLY_XMAX");
    hp->add_option("--out", hp_out, "output CSV path")->envname("ROBUST_KELLY_OUT");

    auto* opt = app.add_subcommand("optimize", "Solve for robust log-optimal weights");
    std::string opt_config, opt_out = "solution.json";
    opt->add_option("--config", opt_config, "run config JSON")
        ->required()
        ->envname("ROBUST_KELLY_CONFIG");
    opt->add_option("--out", opt_out, "output solution JSON path")->envname("ROBUST_KELLY_OUT");

    auto* bt = app.add_subcommand("backtest", "Simulate fixed weights over the price history");
    std::string bt_config, bt_weights, bt_prefix = "backtest";
    bt->add_option("--config", bt_config, "run config JSON")
        ->required()
        ->envname("ROBUST_KELLY_CONFIG");
    bt->add_option("--weights", bt_weights, "weights JSON with a \"k\" array")
        ->required()
        ->envname("ROBUST_KELLY_WEIGHTS");
    bt->add_option("--out-prefix", bt_prefix, "prefix for trajectory/report files")
        ->envname("ROBUST_KELLY_OUT_PREFIX");

    auto* wc = app.add_subcommand("worst-case",
                                  "Worst-case expected log-growth of given weights");
    std::string wc_config, wc_weights;
    wc->add_option("--config", wc_config, "run config JSON")
        ->required()
        ->envname("ROBUST_KELLY_CONFIG");
    wc->add_option("--weights", wc_weights, "weights JSON with a \"k\" array")
        ->required()
        ->envname("ROBUST_KELLY_WEIGHTS");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (hp->parsed()) return cmd_hyperplanes(eps, x_min, x_max, hp_out);
        if (opt->parsed()) return cmd_optimize(opt_config, opt_out);
        if (bt->parsed()) return cmd_backtest(bt_config, bt_weights, bt_prefix);
        if (wc->parsed()) return cmd_worst_case(wc_config, wc_weights);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace kelly::cli
