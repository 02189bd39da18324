#pragma once

// Flat `key = value` configuration and its resolution into a runnable
// scenario. Layers merge as: explicit keys > preset values > built-in defaults.

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tripod/geometry.hpp"

namespace tripod {

struct ParseError : Error
{
    ParseError(int line, const std::string& reason)
        : Error("ParseError", exit_code::kConfig, "line " + std::to_string(line) + ": " + reason), line(line)
    {
    }
    int line;
};

struct UnknownKey : Error
{
    UnknownKey(const std::string& key, int line)
        : Error("UnknownKey", exit_code::kConfig, "line " + std::to_string(line) + ": unknown key '" + key + "'"),
          key(key)
    {
    }
    std::string key;
};

struct DuplicateKey : Error
{
    DuplicateKey(const std::string& key, int line)
        : Error("DuplicateKey", exit_code::kConfig, "line " + std::to_string(line) + ": duplicate key '" + key + "'"),
          key(key), line(line)
    {
    }
    std::string key;
    int line;
};

using ConfigValue = std::variant<double, std::string>;

enum class KeyType { Number, Identifier };

struct KeySpec
{
    std::string key;
    KeyType type;
};

inline const std::vector<KeySpec>& config_schema()
{
    using K = KeyType;
    static const std::vector<KeySpec> schema{
        {"preset", K::Identifier},
        {"rabi.omega_c_khz", K::Number},
        {"rabi.omega_p_khz", K::Number},
        {"rabi.omega_a_khz", K::Number},
        {"detuning.delta_c_khz", K::Number},
        {"detuning.delta_p_khz", K::Number},
        {"detuning.delta_a_khz", K::Number},
        {"decay.gamma0_khz", K::Number},
        {"decay.gamma_opt_khz", K::Number},
        {"decay.gamma14_khz", K::Number},
        {"decay.gamma24_khz", K::Number},
        {"decay.gamma34_khz", K::Number},
        {"decay.gamma_ground_khz", K::Number},
        {"decay.ground_mix_khz", K::Number},
        {"decay.branching_1", K::Number},
        {"decay.branching_2", K::Number},
        {"decay.branching_3", K::Number},
        {"sweep.dp_min_khz", K::Number},
        {"sweep.dp_max_khz", K::Number},
        {"sweep.dp_points", K::Number},
        {"map.d_min_khz", K::Number},
        {"map.d_max_khz", K::Number},
        {"map.d_points", K::Number},
        {"evolve.t_end_ms", K::Number},
        {"evolve.dt_ms", K::Number},
        {"evolve.stride", K::Number},
        {"evolve.initial_level", K::Number},
        {"geometry.l_nm", K::Number},
        {"geometry.l1_nm", K::Number},
        {"geometry.l2_nm", K::Number},
        {"output.normalized", K::Identifier},
    };
    return schema;
}

inline std::optional<KeyType> key_type(const std::string& key)
{
    for (const auto& s : config_schema())
        if (s.key == key)
            return s.type;
    return std::nullopt;
}

/// Parsed configuration: typed values keyed by dotted path, plus the source
/// line of each entry (0 for entries not read from text).
struct Config
{
    std::map<std::string, ConfigValue> values;
    std::map<std::string, int> lines;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::size_t size() const { return values.size(); }

    double number(const std::string& key) const
    {
        const auto it = values.find(key);
        if (it == values.end())
            throw PreconditionError("config has no key '" + key + "'");
        if (const auto* d = std::get_if<double>(&it->second))
            return *d;
        throw PreconditionError("config key '" + key + "' is not numeric");
    }
    const std::string& identifier(const std::string& key) const
    {
        const auto it = values.find(key);
        if (it == values.end())
            throw PreconditionError("config has no key '" + key + "'");
        if (const auto* s = std::get_if<std::string>(&it->second))
            return *s;
        throw PreconditionError("config key '" + key + "' is not an identifier");
    }
    void set(const std::string& key, ConfigValue v, int line = 0)
    {
        values[key] = std::move(v);
        lines[key] = line;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_number(std::string_view s)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

inline bool is_identifier(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    return true;
}

// Parses one non-blank, non-comment line into (key, value).
inline std::pair<std::string, ConfigValue> parse_entry(std::string_view line, int lineno)
{
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
        throw ParseError(lineno, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view raw = trim(line.substr(eq + 1));
    if (key.empty())
        throw ParseError(lineno, "missing key");
    if (raw.empty())
        throw ParseError(lineno, "missing value for '" + key + "'");
    const auto type = key_type(key);
    if (!type)
        throw UnknownKey(key, lineno);
    if (*type == KeyType::Number) {
        const auto v = parse_number(raw);
        if (!v)
            throw ParseError(lineno, "'" + key + "' expects a number, got '" + std::string(raw) + "'");
        return {key, *v};
    }
    if (!is_identifier(raw))
        throw ParseError(lineno, "'" + key + "' expects an identifier, got '" + std::string(raw) + "'");
    return {key, std::string(raw)};
}

} // namespace detail

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
inline Config parse_config(std::string_view text)
{
    Config cfg;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        auto [key, value] = detail::parse_entry(line, lineno);
        if (cfg.has(key))
            throw DuplicateKey(key, lineno);
        cfg.set(key, std::move(value), lineno);
    }
    return cfg;
}

/// Parses a single `key=value` override as given to --set.
inline std::pair<std::string, ConfigValue> parse_override(std::string_view text)
{
    return detail::parse_entry(detail::trim(text), 1);
}

/// Entries of `overlay` replace those of `base`.
inline Config merge(Config base, const Config& overlay)
{
    for (const auto& [k, v] : overlay.values)
        base.set(k, v, overlay.lines.at(k));
    return base;
}

// ---------------------------------------------------------------------------
// Scenario <-> flat keys
// ---------------------------------------------------------------------------

/// Flat-key form of a scenario. Optional parts (map axis, layout) appear only
/// when the scenario carries them.
inline Config scenario_to_config(const Scenario& s)
{
    Config c;
    const auto& p = s.params;
    c.set("rabi.omega_c_khz", p.omega_c);
    c.set("rabi.omega_p_khz", p.omega_p);
    c.set("rabi.omega_a_khz", p.omega_a);
    c.set("detuning.delta_c_khz", p.delta_c);
    c.set("detuning.delta_p_khz", p.delta_p);
    c.set("detuning.delta_a_khz", p.delta_a);
    c.set("decay.gamma0_khz", p.decay.gamma_pop);
    c.set("decay.gamma14_khz", p.decay.gamma_opt[0]);
    c.set("decay.gamma24_khz", p.decay.gamma_opt[1]);
    c.set("decay.gamma34_khz", p.decay.gamma_opt[2]);
    c.set("decay.gamma_ground_khz", p.decay.gamma_ground);
    c.set("decay.ground_mix_khz", p.decay.ground_mix);
    c.set("decay.branching_1", p.decay.branching[0]);
    c.set("decay.branching_2", p.decay.branching[1]);
    c.set("decay.branching_3", p.decay.branching[2]);
    c.set("sweep.dp_min_khz", s.dp_axis.min);
    c.set("sweep.dp_max_khz", s.dp_axis.max);
    c.set("sweep.dp_points", static_cast<double>(s.dp_axis.points));
    if (s.d_axis) {
        c.set("map.d_min_khz", s.d_axis->min);
        c.set("map.d_max_khz", s.d_axis->max);
        c.set("map.d_points", static_cast<double>(s.d_axis->points));
    }
    if (s.layout) {
        c.set("geometry.l_nm", s.layout->l);
        c.set("geometry.l1_nm", s.layout->l1);
        c.set("geometry.l2_nm", s.layout->l2);
    }
    return c;
}

/// Built-in defaults: a resonant tripod on the reference Lambda rates with
/// the default probe axis and a symmetric-detuning map axis.
inline Config default_config()
{
    Scenario s;
    s.name = "default";
    s.params.omega_c = kPresetOmegaC;
    s.params.omega_p = kPresetOmegaC / 20.0;
    s.params.omega_a = kPresetOmegaC;
    s.params.decay = reference_lambda_decay(kPresetOmegaC);
    s.dp_axis = {-3.0 * kPresetOmegaC, 3.0 * kPresetOmegaC, 401};
    s.d_axis = SweepAxis{-kPresetOmegaC, kPresetOmegaC, 201};
    Config c = scenario_to_config(s);
    c.set("evolve.t_end_ms", 0.0); // 0 selects 200 / Gamma_0
    c.set("evolve.dt_ms", 0.0); // 0 selects half the largest stable step
    c.set("evolve.stride", 10.0);
    c.set("evolve.initial_level", 0.0); // 0 selects the equal ground-state mixture
    c.set("output.normalized", std::string("false"));
    return c;
}

enum class Layer { Default, Preset, Explicit };

inline std::string to_string(Layer l)
{
    switch (l) {
    case Layer::Default: return "default";
    case Layer::Preset: return "preset";
    case Layer::Explicit: return "explicit";
    }
    return "?";
}

struct EvolveSettings
{
    double t_end = 0.0; ///< ms, 0 = 200 / Gamma_0
    double dt = 0.0;    ///< ms, 0 = automatic
    std::size_t stride = 1;
    int initial_level = 0; ///< 1..4, or 0 for the ground-state mixture
};

/// Everything a command needs, with the layer each key was taken from.
struct RunSettings
{
    Scenario scenario;
    EvolveSettings evolve;
    bool normalized = false;
    Config merged;
    std::map<std::string, Layer> origin;
    std::vector<std::string> warnings;

    Layer origin_of(const std::string& key) const { return origin.at(key); }
};

namespace detail {

inline std::size_t count_value(const Config& c, const std::string& key, std::size_t min)
{
    const double v = c.number(key);
    if (!(v >= static_cast<double>(min)) || v != std::floor(v) || v > 1e8)
        throw InvalidParams("'" + key + "' must be an integer >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

inline bool flag_value(const Config& c, const std::string& key)
{
    const auto& v = c.identifier(key);
    if (v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "no" || v == "off")
        return false;
    throw InvalidParams("'" + key + "' must be true or false");
}

inline SweepAxis axis_value(const Config& c, const std::string& lo, const std::string& hi, const std::string& n)
{
    SweepAxis a{c.number(lo), c.number(hi), count_value(c, n, 1)};
    if (a.points > 1 && !(a.max > a.min))
        throw InvalidParams("'" + hi + "' must exceed '" + lo + "'");
    return a;
}

} // namespace detail

/// Resolves explicit keys over the named preset (from the `preset` key, if
/// any) over the built-in defaults.
inline RunSettings resolve(const Config& explicit_keys)
{
    RunSettings rs;
    Config merged = default_config();
    for (const auto& [k, v] : merged.values)
        rs.origin[k] = Layer::Default;

    std::optional<Scenario> base;
    if (explicit_keys.has("preset")) {
        base = preset(explicit_keys.identifier("preset"));
        for (const auto& [k, v] : scenario_to_config(*base).values) {
            merged.set(k, v);
            rs.origin[k] = Layer::Preset;
        }
    }
    for (const auto& [k, v] : explicit_keys.values) {
        merged.set(k, v, explicit_keys.lines.at(k));
        rs.origin[k] = Layer::Explicit;
    }

    // gamma_opt is shorthand for all three optical rates unless one of them
    // is given explicitly as well.
    if (explicit_keys.has("decay.gamma_opt_khz")) {
        for (const char* k : {"decay.gamma14_khz", "decay.gamma24_khz", "decay.gamma34_khz"}) {
            if (!explicit_keys.has(k)) {
                merged.set(k, explicit_keys.number("decay.gamma_opt_khz"));
                rs.origin[k] = Layer::Explicit;
            }
        }
    }

    Scenario s = base ? *base : Scenario{};
    if (!base) {
        s.name = "custom";
        s.description = "defaults with explicit overrides";
        s.command = "spectrum";
    } else if (explicit_keys.size() > 1) {
        s.name = base->name + "+overrides";
    }

    auto& p = s.params;
    p.omega_c = merged.number("rabi.omega_c_khz");
    p.omega_p = merged.number("rabi.omega_p_khz");
    p.omega_a = merged.number("rabi.omega_a_khz");
    p.delta_c = merged.number("detuning.delta_c_khz");
    p.delta_p = merged.number("detuning.delta_p_khz");
    p.delta_a = merged.number("detuning.delta_a_khz");
    p.decay.gamma_pop = merged.number("decay.gamma0_khz");
    p.decay.gamma_opt = {merged.number("decay.gamma14_khz"), merged.number("decay.gamma24_khz"),
                         merged.number("decay.gamma34_khz")};
    p.decay.gamma_ground = merged.number("decay.gamma_ground_khz");
    p.decay.ground_mix = merged.number("decay.ground_mix_khz");
    p.decay.branching = {merged.number("decay.branching_1"), merged.number("decay.branching_2"),
                         merged.number("decay.branching_3")};

    const bool explicit_geometry = explicit_keys.has("geometry.l_nm") || explicit_keys.has("geometry.l1_nm") ||
                                   explicit_keys.has("geometry.l2_nm");
    if (merged.has("geometry.l_nm") || explicit_geometry) {
        StripeLayout g = s.layout.value_or(StripeLayout{});
        auto length = [&](const char* key, double fallback) { return merged.has(key) ? merged.number(key) : fallback; };
        g.l = length("geometry.l_nm", g.l);
        g.l1 = length("geometry.l1_nm", g.l1);
        g.l2 = length("geometry.l2_nm", g.l2);
        s.layout = g;
        if (explicit_geometry) {
            if (explicit_keys.has("detuning.delta_c_khz") || explicit_keys.has("detuning.delta_a_khz"))
                throw InvalidParams("give either geometry lengths or detunings delta_c/delta_A, not both");
            p = layout_to_params(g, p);
            rs.origin["detuning.delta_c_khz"] = Layer::Explicit;
            rs.origin["detuning.delta_a_khz"] = Layer::Explicit;
            merged.set("detuning.delta_c_khz", p.delta_c);
            merged.set("detuning.delta_a_khz", p.delta_a);
        }
        const auto& anchors = default_calibration().anchors;
        for (double dl : {g.l1 - g.l, g.l2 - g.l})
            if (dl < anchors.front().first || dl > anchors.back().first)
                rs.warnings.push_back("stripe length change " + std::to_string(dl) +
                                      " nm lies outside the calibration anchors; detuning is extrapolated");
    }
    validate(p);

    s.dp_axis = detail::axis_value(merged, "sweep.dp_min_khz", "sweep.dp_max_khz", "sweep.dp_points");
    s.d_axis = detail::axis_value(merged, "map.d_min_khz", "map.d_max_khz", "map.d_points");

    rs.evolve.t_end = merged.number("evolve.t_end_ms");
    rs.evolve.dt = merged.number("evolve.dt_ms");
    rs.evolve.stride = detail::count_value(merged, "evolve.stride", 1);
    const double lvl = merged.number("evolve.initial_level");
    if (lvl != 0.0 && lvl != 1.0 && lvl != 2.0 && lvl != 3.0 && lvl != 4.0)
        throw InvalidParams("'evolve.initial_level' must be 0 (ground mixture) or 1..4");
    rs.evolve.initial_level = static_cast<int>(lvl);
    rs.normalized = detail::flag_value(merged, "output.normalized");

    rs.scenario = std::move(s);
    rs.merged = std::move(merged);
    return rs;
}

} // namespace tripod
