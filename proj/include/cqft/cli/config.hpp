#pragma once

// Experiment configuration: a flat sectioned key = value text format, one
// section per experiment, '#' comments, no nesting.  Unknown sections and
// keys are rejected with line diagnostics, and every numeric is range-checked
// against the module it feeds before any experiment runs.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqft::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { equivalence, propagator, lifetime, corridor, all };

inline ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "equivalence") return ExperimentKind::equivalence;
    if (name == "propagator") return ExperimentKind::propagator;
    if (name == "lifetime") return ExperimentKind::lifetime;
    if (name == "corridor") return ExperimentKind::corridor;
    if (name == "all") return ExperimentKind::all;
    throw ConfigError("unknown experiment '" + name +
                      "' (expected equivalence|propagator|lifetime|corridor|all)");
}

enum class CenterMode { constant, randomUniform };

struct EquivalenceConfig {
    std::vector<int> dims;
    double spacing = 1.0;
    double mass = 1.0;
    std::vector<double> epsilons;
    CenterMode centerMode = CenterMode::randomUniform;
    double centerValue = 0.0;  // constant mode
    double centerMin = -2.0;   // random-uniform mode
    double centerMax = 2.0;
    int draws = 1;
    std::int64_t seed = 0;
};

struct PropagatorConfig {
    double omega_k = 1.0;
    std::vector<double> epsilons;
    double tMin = 0.0;
    double tMax = 10.0;
    int tCount = 11;
    double tol = 1e-6;
};

struct LifetimeConfig {
    double mass = 1.0;
    double omega_k = 1.0;
    std::vector<double> epsilons;
    std::vector<double> gammas;
    double tMin = 1.0;
    double tMax = 40.0;
    int tCount = 40;
};

struct CorridorConfig {
    double epsilon = 1.0;
    std::vector<double> dvs;
    long long nSamples = 1'000'000;
    std::int64_t seed = 0;
    double mass = 1.0;
};

struct ExperimentConfig {
    std::optional<EquivalenceConfig> equivalence;
    std::optional<PropagatorConfig> propagator;
    std::optional<LifetimeConfig> lifetime;
    std::optional<CorridorConfig> corridor;
};

namespace detail_cfg {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

inline std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r");
    if (from == std::string::npos) return {};
    const auto to = s.find_last_not_of(" \t\r");
    return s.substr(from, to - from + 1);
}

inline std::map<std::string, Section> parse_sections(const std::string& text) {
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string line;
    std::string current;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineNo) + ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty())
                throw ConfigError("line " + std::to_string(lineNo) + ": empty section name");
            sections.try_emplace(current);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
        if (current.empty())
            throw ConfigError("line " + std::to_string(lineNo) + ": key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineNo) + ": empty key");
        auto [it, inserted] = sections[current].try_emplace(key, Entry{value, lineNo});
        if (!inserted)
            throw ConfigError("line " + std::to_string(lineNo) + ": duplicate key '" + key +
                              "' in [" + current + "]");
    }
    return sections;
}

// typed access with consumption tracking, so leftovers become hard errors
class Reader {
  public:
    Reader(std::string section, const Section& entries) : name_(std::move(section)) {
        for (const auto& [key, entry] : entries) entries_[key] = entry;
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string getString(const std::string& key, const std::string& fallback) {
        const Entry* e = consume(key);
        return e ? e->value : fallback;
    }

    double getDouble(const std::string& key) {
        const Entry* e = consume(key);
        if (!e) missing(key);
        return toDouble(key, *e);
    }

    double getDouble(const std::string& key, double fallback) {
        const Entry* e = consume(key);
        return e ? toDouble(key, *e) : fallback;
    }

    long long getInt(const std::string& key, long long fallback) {
        const Entry* e = consume(key);
        return e ? toInt(key, *e) : fallback;
    }

    std::vector<double> getDoubleList(const std::string& key) {
        const Entry* e = consume(key);
        if (!e) missing(key);
        return toList(key, *e);
    }

    std::vector<double> getDoubleList(const std::string& key, std::vector<double> fallback) {
        const Entry* e = consume(key);
        return e ? toList(key, *e) : std::move(fallback);
    }

    std::vector<int> getIntList(const std::string& key) {
        const Entry* e = consume(key);
        if (!e) missing(key);
        std::vector<int> out;
        for (double v : toList(key, *e)) {
            if (v != static_cast<double>(static_cast<int>(v)))
                fail(key, *e, "expected integers");
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    void finish() const {
        for (const auto& [key, entry] : entries_) {
            if (!consumed_.count(key))
                throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key +
                                  "' in [" + name_ + "]");
        }
    }

    [[noreturn]] void reject(const std::string& key, const std::string& why) const {
        const auto it = entries_.find(key);
        const std::string where =
            it != entries_.end() ? "line " + std::to_string(it->second.line) + ": " : "";
        throw ConfigError(where + "key '" + key + "' in [" + name_ + "]: " + why);
    }

  private:
    const Entry* consume(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        consumed_.insert(key);
        return &it->second;
    }

    [[noreturn]] void missing(const std::string& key) const {
        throw ConfigError("missing required key '" + key + "' in [" + name_ + "]");
    }

    [[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& why) const {
        throw ConfigError("line " + std::to_string(e.line) + ": key '" + key + "' in [" + name_ +
                          "]: " + why);
    }

    double toDouble(const std::string& key, const Entry& e) const {
        try {
            std::size_t used = 0;
            const double v = std::stod(e.value, &used);
            if (used != e.value.size()) fail(key, e, "trailing characters after number");
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail(key, e, "expected a number, got '" + e.value + "'");
        }
    }

    long long toInt(const std::string& key, const Entry& e) const {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(e.value, &used);
            if (used != e.value.size()) fail(key, e, "trailing characters after integer");
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail(key, e, "expected an integer, got '" + e.value + "'");
        }
    }

    std::vector<double> toList(const std::string& key, const Entry& e) const {
        std::vector<double> out;
        std::string token;
        std::istringstream in(e.value);
        while (std::getline(in, token, ',')) {
            token = trim(token);
            if (token.empty()) fail(key, e, "empty list element");
            try {
                std::size_t used = 0;
                out.push_back(std::stod(token, &used));
                if (used != token.size()) fail(key, e, "bad list element '" + token + "'");
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception&) {
                fail(key, e, "bad list element '" + token + "'");
            }
        }
        if (out.empty()) fail(key, e, "empty list");
        return out;
    }

    std::string name_;
    std::map<std::string, Entry> entries_;
    std::set<std::string> consumed_;
};

inline EquivalenceConfig read_equivalence(Reader& r) {
    EquivalenceConfig c;
    c.dims = r.getIntList("dims");
    if (c.dims.empty() || c.dims.size() > 4) r.reject("dims", "need 1-4 axes");
    for (int d : c.dims)
        if (d < 1) r.reject("dims", "every axis must be >= 1");
    c.spacing = r.getDouble("spacing", 1.0);
    if (!(c.spacing > 0.0)) r.reject("spacing", "must be > 0");
    c.mass = r.getDouble("mass", 1.0);
    if (!(c.mass >= 0.0)) r.reject("mass", "must be >= 0");
    c.epsilons = r.getDoubleList("epsilons");
    for (double e : c.epsilons)
        if (!(e > 0.0)) r.reject("epsilons", "every epsilon must be > 0");
    const std::string mode = r.getString("phi_cl", "random-uniform");
    if (mode == "constant")
        c.centerMode = CenterMode::constant;
    else if (mode == "random-uniform")
        c.centerMode = CenterMode::randomUniform;
    else
        r.reject("phi_cl", "expected constant|random-uniform");
    c.centerValue = r.getDouble("phi_cl_value", 0.0);
    c.centerMin = r.getDouble("phi_cl_min", -2.0);
    c.centerMax = r.getDouble("phi_cl_max", 2.0);
    if (!(c.centerMax >= c.centerMin)) r.reject("phi_cl_max", "must be >= phi_cl_min");
    c.draws = static_cast<int>(r.getInt("draws", 1));
    if (c.draws < 1) r.reject("draws", "must be >= 1");
    c.seed = r.getInt("seed", 0);
    r.finish();
    return c;
}

inline PropagatorConfig read_propagator(Reader& r) {
    PropagatorConfig c;
    c.omega_k = r.getDouble("omega_k");
    if (!(c.omega_k > 0.0)) r.reject("omega_k", "must be > 0");
    c.epsilons = r.getDoubleList("epsilons");
    for (double e : c.epsilons)
        if (!(e > 0.0)) r.reject("epsilons", "every epsilon must be > 0");
    c.tMin = r.getDouble("t_min", 0.0);
    c.tMax = r.getDouble("t_max", 10.0);
    if (!(c.tMax >= c.tMin)) r.reject("t_max", "must be >= t_min");
    c.tCount = static_cast<int>(r.getInt("t_count", 11));
    if (c.tCount < 1) r.reject("t_count", "must be >= 1");
    c.tol = r.getDouble("tol", 1e-6);
    if (!(c.tol >= 1e-10 && c.tol <= 1e-3)) r.reject("tol", "must lie in [1e-10, 1e-3]");
    r.finish();
    return c;
}

inline LifetimeConfig read_lifetime(Reader& r) {
    LifetimeConfig c;
    c.mass = r.getDouble("mass");
    if (!(c.mass > 0.0)) r.reject("mass", "must be > 0");
    c.omega_k = r.getDouble("omega_k", c.mass);
    if (!(c.omega_k > 0.0)) r.reject("omega_k", "must be > 0");
    c.epsilons = r.getDoubleList("epsilons");
    for (double e : c.epsilons)
        if (!(e > 0.0)) r.reject("epsilons", "every epsilon must be > 0");
    c.tMin = r.getDouble("t_min", 1.0);
    c.tMax = r.getDouble("t_max", 40.0);
    if (!(c.tMax > c.tMin)) r.reject("t_max", "must be > t_min");
    c.tCount = static_cast<int>(r.getInt("t_count", 40));
    if (c.tCount < 8) r.reject("t_count", "envelope fit needs at least 8 samples");
    c.gammas = r.getDoubleList("gammas", {1.0});
    for (double g : c.gammas)
        if (!(g >= 1.0)) r.reject("gammas", "every gamma must be >= 1");
    r.finish();
    return c;
}

inline CorridorConfig read_corridor(Reader& r) {
    CorridorConfig c;
    c.epsilon = r.getDouble("epsilon");
    if (!(c.epsilon > 0.0)) r.reject("epsilon", "must be > 0");
    c.dvs = r.getDoubleList("dvs");
    for (double dv : c.dvs)
        if (!(dv > 0.0)) r.reject("dvs", "every dv must be > 0");
    c.nSamples = r.getInt("n_samples", 1'000'000);
    if (c.nSamples < 10'000) r.reject("n_samples", "must be >= 10000");
    c.seed = r.getInt("seed", 0);
    c.mass = r.getDouble("mass", 1.0);
    if (!(c.mass > 0.0)) r.reject("mass", "must be > 0");
    r.finish();
    return c;
}

}  // namespace detail_cfg

// Parse and validate the sections required by the requested experiment.
// seedOverride, when set, replaces every section seed.
inline ExperimentConfig parse_config(const std::string& text, ExperimentKind kind,
                                     std::optional<std::int64_t> seedOverride = {}) {
    const auto sections = detail_cfg::parse_sections(text);
    static const std::set<std::string> known = {"equivalence", "propagator", "lifetime",
                                                "corridor"};
    for (const auto& [name, entries] : sections) {
        if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");
    }

    auto need = [&](const std::string& name) -> const detail_cfg::Section& {
        const auto it = sections.find(name);
        if (it == sections.end()) throw ConfigError("missing required section [" + name + "]");
        return it->second;
    };

    ExperimentConfig config;
    const bool all = kind == ExperimentKind::all;
    if (all || kind == ExperimentKind::equivalence) {
        detail_cfg::Reader r("equivalence", need("equivalence"));
        config.equivalence = detail_cfg::read_equivalence(r);
        if (seedOverride) config.equivalence->seed = *seedOverride;
    }
    if (all || kind == ExperimentKind::propagator) {
        detail_cfg::Reader r("propagator", need("propagator"));
        config.propagator = detail_cfg::read_propagator(r);
    }
    if (all || kind == ExperimentKind::lifetime) {
        detail_cfg::Reader r("lifetime", need("lifetime"));
        config.lifetime = detail_cfg::read_lifetime(r);
    }
    if (all || kind == ExperimentKind::corridor) {
        detail_cfg::Reader r("corridor", need("corridor"));
        config.corridor = detail_cfg::read_corridor(r);
        if (seedOverride) config.corridor->seed = *seedOverride;
    }
    return config;
}

}  // namespace cqft::cli
