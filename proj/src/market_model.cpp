#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "acnote/error.hpp"
#include "acnote/keyvalue.hpp"
#include "acnote/montecarlo.hpp"

namespace acnote::mc {

namespace {

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

void require(bool condition, const std::string& message) {
    if (!condition) throw DomainError(message);
}

void check_loss_params(const std::string& name, double b1, double b2) {
    require(b1 > 0.0 && b1 <= 1.0, name + ": b1 must lie in (0, 1]");
    require(b2 > 0.0 && b2 <= 1.0, name + ": b2 must lie in (0, 1]");
}

class SpecReader {
public:
    SpecReader(const KeyValueDocument& doc, std::string model) : doc_(doc), model_(std::move(model)) {}

    std::string text(const std::string& key) {
        used_.insert(key);
        auto all = doc_.find_all(key);
        if (all.empty()) throw DomainError("model spec (" + model_ + "): missing key '" + key + "'");
        if (all.size() > 1) throw DomainError("model spec: key '" + key + "' given more than once");
        return all.front()->value;
    }

    double number(const std::string& key) {
        auto value = text(key);
        auto parsed = parse_double(value);
        if (!parsed) throw DomainError("model spec: '" + key + "' is not a number: '" + value + "'");
        return *parsed;
    }

    double number_or(const std::string& key, double fallback) {
        return doc_.find(key) ? number(key) : (used_.insert(key), fallback);
    }

    std::size_t count_or(const std::string& key, std::size_t fallback) {
        if (!doc_.find(key)) {
            used_.insert(key);
            return fallback;
        }
        double value = number(key);
        if (!(value >= 1.0) || value != std::floor(value)) {
            throw DomainError("model spec: '" + key + "' must be a positive integer");
        }
        return static_cast<std::size_t>(value);
    }

    std::size_t count(const std::string& key) {
        text(key);
        return count_or(key, 0);
    }

    bool flag_or(const std::string& key, bool fallback) {
        if (!doc_.find(key)) {
            used_.insert(key);
            return fallback;
        }
        auto value = text(key);
        if (value == "true") return true;
        if (value == "false") return false;
        throw DomainError("model spec: '" + key + "' must be true or false");
    }

    void reject_unknown() const {
        for (const auto& e : doc_.entries) {
            if (e.key != "model" && !used_.count(e.key)) {
                throw DomainError("model spec (" + model_ + "): unknown key '" + e.key + "'");
            }
        }
    }

private:
    const KeyValueDocument& doc_;
    std::string model_;
    std::set<std::string> used_;
};

} // namespace

std::string model_name(const MarketModel& model) {
    static constexpr const char* names[] = {"iid_sign", "daily_lattice", "geometric_walk", "markov_sign", "bootstrap"};
    return names[model.index()];
}

void check(const MarketModel& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IidSignModel>) {
                require(is_probability(m.p), "iid_sign: p must lie in [0, 1]");
                check_loss_params("iid_sign", m.b1, m.b2);
            } else if constexpr (std::is_same_v<T, DailyLatticeModel>) {
                require(m.up > 1.0 && m.down > 0.0 && m.down < 1.0, "daily_lattice: need up > 1 > down > 0");
                require(is_probability(m.q), "daily_lattice: q must lie in [0, 1]");
                require(m.days_per_quarter >= 1, "daily_lattice: days_per_quarter must be at least 1");
            } else if constexpr (std::is_same_v<T, GeometricWalkModel>) {
                require(std::isfinite(m.mu), "geometric_walk: mu must be finite");
                require(m.sigma >= 0.0 && std::isfinite(m.sigma), "geometric_walk: sigma must be nonnegative");
                require(m.trading_days >= 1, "geometric_walk: trading_days must be at least 1");
            } else if constexpr (std::is_same_v<T, MarkovSignModel>) {
                require(is_probability(m.p), "markov_sign: p must lie in [0, 1]");
                require(is_probability(m.persistence), "markov_sign: persistence must lie in [0, 1]");
                require(m.persistence >= 0.5 || m.allow_euphoria,
                        "markov_sign: persistence below 1/2 contradicts momentum; set allow_euphoria = true");
                check_loss_params("markov_sign", m.b1, m.b2);
            } else {
                require(!m.daily_growth.empty(), "bootstrap: empty history");
                require(m.trading_days >= 1, "bootstrap: trading_days must be at least 1");
                for (double g : m.daily_growth) require(g > 0.0 && std::isfinite(g), "bootstrap: bad growth factor");
            }
        },
        model);
}

std::vector<double> loss_support(double b1) {
    const double half_width = std::min(b1, 1.0 - b1) / 2.0;
    std::vector<double> points;
    for (double offset : {-1.0, -0.5, 0.0, 0.5, 1.0}) points.push_back(-b1 + half_width * offset);
    return points;
}

BootstrapModel bootstrap_from_history(const IndexPath& history, std::size_t trading_days) {
    const auto& entries = history.entries();
    if (entries.size() < 2) throw DomainError("bootstrap: empty history (need at least two closes)");
    BootstrapModel model;
    model.trading_days = trading_days;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        model.daily_growth.push_back(entries[i].close / entries[i - 1].close);
    }
    return model;
}

MarketModel parse_model_spec(std::string_view text, const std::filesystem::path& base_dir) {
    auto doc = parse_key_values(text);
    if (!doc.malformed.empty()) {
        throw DomainError("model spec: line " + std::to_string(doc.malformed.front()) + " is not 'key = value'");
    }
    auto* kind = doc.find("model");
    if (!kind) throw DomainError("model spec: missing key 'model'");
    if (doc.find_all("model").size() > 1) throw DomainError("model spec: key 'model' given more than once");
    SpecReader r(doc, kind->value);

    MarketModel model;
    if (kind->value == "iid_sign") {
        model = IidSignModel{r.number("p"), r.number("b1"), r.number("b2")};
    } else if (kind->value == "daily_lattice") {
        model = DailyLatticeModel{r.number("up"), r.number("down"), r.number("q"), r.count("days_per_quarter")};
    } else if (kind->value == "geometric_walk") {
        model = GeometricWalkModel{r.number("mu"), r.number("sigma"), r.count_or("trading_days", 381)};
    } else if (kind->value == "markov_sign") {
        MarkovSignModel m;
        m.p = r.number("p");
        m.persistence = r.number("persistence");
        m.b1 = r.number("b1");
        m.b2 = r.number("b2");
        m.allow_euphoria = r.flag_or("allow_euphoria", false);
        model = m;
    } else if (kind->value == "bootstrap") {
        std::filesystem::path history = r.text("history");
        if (history.is_relative()) history = base_dir / history;
        auto days = r.count_or("trading_days", 381);
        // The start level only scales returns; growth factors ignore it.
        auto path = read_prices_csv_file(history.string(), 1.0);
        model = bootstrap_from_history(path, days);
    } else {
        throw DomainError("model spec: unknown model '" + kind->value +
                          "' (expected iid_sign, daily_lattice, geometric_walk, markov_sign or bootstrap)");
    }
    r.reject_unknown();
    check(model);
    return model;
}

MarketModel load_model_spec(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open model spec '" + file.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model_spec(buffer.str(), file.parent_path());
}

} // namespace acnote::mc
