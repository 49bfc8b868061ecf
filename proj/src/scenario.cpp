// SPDX-License-Identifier: Apache-2.0

#include "distmimo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace distmimo {

namespace {

const std::set<std::string> kModes = {
    "se",          "averaged-sinr",   "distortion-terms", "signal-distortion-vs-m",
    "eigenvalues", "se-cdf",          "asymptotic-se"};
const std::set<std::string> kSweepVars = {"k", "m", "b", "snr-db"};
const std::set<std::string> kHardwareCases = {"ideal", "ue-only", "bs-only", "ue-bs"};

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

template <typename T>
T get(const nlohmann::json& j, const std::string& field, const T& fallback) {
    if (!j.contains(field)) return fallback;
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(field, e.what());
    }
}

template <typename T>
T get_required(const nlohmann::json& j, const std::string& field) {
    if (!j.contains(field)) fail(field, "is required");
    try {
        return j.at(field).get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(field, e.what());
    }
}

SnrSpec parse_snr(const nlohmann::json& j) {
    SnrSpec s;
    if (!j.contains("snr-db")) return s;
    const auto& v = j.at("snr-db");
    if (v.is_number()) {
        s.value_db = v.get<double>();
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        s.is_range = true;
        s.lo_db = v[0].get<double>();
        s.hi_db = v[1].get<double>();
        if (s.lo_db > s.hi_db) fail("snr-db", "range must satisfy lo <= hi");
    } else {
        fail("snr-db", "must be a number or a [lo, hi] pair in dB");
    }
    return s;
}

std::vector<double> int_range(int lo, int hi) {
    std::vector<double> v;
    for (int i = lo; i <= hi; ++i) v.push_back(i);
    return v;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!kModes.count(mode)) fail("mode", "unknown mode '" + mode + "'");
    if (!seed_set) fail("seed", "is required (no wall-clock seeding)");
    if (M < 1) fail("channel.m", "must be a positive integer");
    if (K < 1) fail("channel.k", "must be a positive integer");
    if (angular_std_deg < 0.0) fail("channel.angular-std", "must be >= 0 degrees");
    if (antenna_spacing <= 0.0) fail("channel.antenna-spacing", "must be > 0 wavelengths");
    for (double a : ue_angles_deg)
        if (a < -60.0 || a > 60.0) fail("channel.ue-angles", "angles must lie in [-60, 60]");
    if (!ue_angles_deg.empty() && static_cast<int>(ue_angles_deg.size()) != K)
        fail("channel.ue-angles", "must list exactly K angles");
    try {
        fading_kind_from_string(channel_kind);
        for (const auto& k : channel_kinds) fading_kind_from_string(k);
    } catch (const std::invalid_argument& e) {
        fail("channel.kind", e.what());
    }
    if (kappa <= 0.0 || kappa > 1.0) fail("kappa", "must lie in (0, 1]");
    if (frontend.kind != "identity" && frontend.kind != "third-order" &&
        frontend.kind != "quantizer" && frontend.kind != "composite")
        fail("front-end.kind", "unknown kind '" + frontend.kind + "'");
    if (frontend.alpha <= 0.0) fail("front-end.alpha", "must be > 0");
    if (frontend.b_off_db < 0.0) fail("front-end.b-off-db", "must be >= 0 dB");
    if (frontend.bits < 1 || frontend.bits > 12) fail("front-end.bits", "must lie in [1, 12]");
    if (schemes.empty()) fail("schemes", "must list at least one scheme");
    for (const auto& s : schemes) {
        try {
            scheme_from_string(s);
        } catch (const std::invalid_argument& e) {
            fail("schemes", e.what());
        }
    }
    if (correlation_mode != "corr" && correlation_mode != "uncorr" &&
        correlation_mode != "both")
        fail("correlation-mode", "must be corr, uncorr, or both");
    if (realizations < 1) fail("realizations", "must be >= 1");
    const bool se_output = mode == "se" || mode == "se-cdf" || mode == "averaged-sinr";
    if (se_output && realizations < 100)
        fail("realizations", "must be >= 100 for SE/SINR outputs");
    if (mc_samples < 10000) fail("mc-samples", "must be >= 10000");

    const bool needs_sweep = mode != "se-cdf";
    if (needs_sweep) {
        if (!sweep) fail("sweep", "exactly one sweep variable is required");
        if (!kSweepVars.count(sweep->variable))
            fail("sweep.variable", "must be one of k, m, b, snr-db");
        if (sweep->values.empty()) fail("sweep.values", "must be non-empty");
        if (sweep->variable == "k" || sweep->variable == "m" || sweep->variable == "b")
            for (double v : sweep->values)
                if (v < 1.0 || v != std::floor(v))
                    fail("sweep.values", "must be positive integers for " + sweep->variable);
        if (mode == "averaged-sinr" && sweep->variable != "snr-db")
            fail("sweep.variable", "averaged-sinr sweeps snr-db");
        if (mode == "asymptotic-se" && sweep->variable != "m")
            fail("sweep.variable", "asymptotic-se sweeps m");
    } else if (sweep) {
        fail("sweep", "se-cdf draws SNRs at random and takes no sweep");
    }
    if (mode == "averaged-sinr")
        for (const auto& s : schemes)
            if (s != "mr" && s != "da-mr")
                fail("schemes", "averaged-sinr supports mr and da-mr only");
    if (mode == "asymptotic-se") {
        if (hardware_cases.empty()) fail("hardware-cases", "must be non-empty");
        for (const auto& c : hardware_cases)
            if (!kHardwareCases.count(c))
                fail("hardware-cases", "unknown case '" + c + "'");
    }
    if (mode == "se-cdf") {
        if (channel_kinds.empty())
            fail("channel-kinds", "se-cdf requires at least one channel model");
        if (!snr.is_range)
            fail("snr-db", "se-cdf requires an SNR range to draw from");
    }
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    ScenarioConfig c;
    c.mode = get<std::string>(j, "mode", c.mode);

    const nlohmann::json ch = j.contains("channel") ? j.at("channel")
                                                    : nlohmann::json::object();
    if (!ch.is_object()) fail("channel", "must be an object");
    c.channel_kind = get<std::string>(ch, "kind", c.channel_kind);
    c.M = get<int>(ch, "m", c.M);
    c.K = get<int>(ch, "k", c.K);
    c.angular_std_deg = get<double>(ch, "angular-std", c.angular_std_deg);
    c.antenna_spacing = get<double>(ch, "antenna-spacing", c.antenna_spacing);
    c.ue_angles_deg = get<std::vector<double>>(ch, "ue-angles", {});

    c.snr = parse_snr(j);

    const nlohmann::json fe = j.contains("front-end") ? j.at("front-end")
                                                      : nlohmann::json::object();
    if (!fe.is_object()) fail("front-end", "must be an object");
    c.frontend.kind = get<std::string>(fe, "kind", c.frontend.kind);
    c.frontend.alpha = get<double>(fe, "alpha", c.frontend.alpha);
    c.frontend.b_off_db = get<double>(fe, "b-off-db", c.frontend.b_off_db);
    c.frontend.bits = get<int>(fe, "bits", c.frontend.bits);

    c.kappa = get<double>(j, "kappa", c.kappa);
    c.schemes = get<std::vector<std::string>>(j, "schemes", c.schemes);
    c.correlation_mode = get<std::string>(j, "correlation-mode", c.correlation_mode);
    c.realizations = get<int>(j, "realizations", c.realizations);
    c.mc_samples = get<std::int64_t>(j, "mc-samples", c.mc_samples);
    if (j.contains("seed")) {
        c.seed = get_required<std::uint64_t>(j, "seed");
        c.seed_set = true;
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (!s.is_object()) fail("sweep", "must be an object");
        SweepSpec sw;
        sw.variable = get_required<std::string>(s, "variable");
        sw.values = get_required<std::vector<double>>(s, "values");
        c.sweep = std::move(sw);
    }
    c.channel_kinds = get<std::vector<std::string>>(j, "channel-kinds", {});
    c.hardware_cases =
        get<std::vector<std::string>>(j, "hardware-cases", c.hardware_cases);

    for (const auto& [key, val] : j.items()) {
        (void)val;
        static const std::set<std::string> known = {
            "mode",   "channel",       "snr-db",           "front-end",
            "kappa",  "schemes",       "correlation-mode", "realizations",
            "mc-samples", "seed",      "sweep",            "channel-kinds",
            "hardware-cases"};
        if (!known.count(key)) fail(key, "unknown field");
    }
    c.validate();
    return c;
}

nlohmann::json ScenarioConfig::to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["channel"] = {{"kind", channel_kind},
                    {"m", M},
                    {"k", K},
                    {"angular-std", angular_std_deg},
                    {"antenna-spacing", antenna_spacing}};
    if (!ue_angles_deg.empty()) j["channel"]["ue-angles"] = ue_angles_deg;
    if (snr.is_range)
        j["snr-db"] = {snr.lo_db, snr.hi_db};
    else
        j["snr-db"] = snr.value_db;
    j["front-end"] = {{"kind", frontend.kind},
                      {"alpha", frontend.alpha},
                      {"b-off-db", frontend.b_off_db},
                      {"bits", frontend.bits}};
    j["kappa"] = kappa;
    j["schemes"] = schemes;
    j["correlation-mode"] = correlation_mode;
    j["realizations"] = realizations;
    j["mc-samples"] = mc_samples;
    if (seed_set) j["seed"] = seed;
    if (sweep) j["sweep"] = {{"variable", sweep->variable}, {"values", sweep->values}};
    if (!channel_kinds.empty()) j["channel-kinds"] = channel_kinds;
    if (mode == "asymptotic-se") j["hardware-cases"] = hardware_cases;
    return j;
}

ScenarioConfig figure_preset(const std::string& name) {
    ScenarioConfig c;
    c.seed = 20180907;  // deterministic default, overridable from the CLI
    c.seed_set = true;
    c.frontend = {"third-order", 1.0 / 3.0, 7.0, 6};
    c.kappa = 0.99;
    c.snr = {};  // 0 dB for every UE

    if (name == "fig3") {
        c.mode = "distortion-terms";
        c.M = 200;
        c.sweep = SweepSpec{"k", int_range(1, 20)};
        c.realizations = 1;
        c.schemes = {"mr"};
    } else if (name == "fig4") {
        c.mode = "signal-distortion-vs-m";
        c.K = 1;
        c.sweep = SweepSpec{"m", {10, 20, 50, 100, 200, 500, 1000}};
        c.realizations = 1000;
        c.schemes = {"da-mr", "da-zf"};
    } else if (name == "fig5") {
        c.mode = "eigenvalues";
        c.M = 200;
        c.sweep = SweepSpec{"k", {5, 10, 15}};
        c.realizations = 100;
        c.schemes = {"mr"};
    } else if (name == "fig6") {
        c.mode = "se";
        c.M = 100;
        c.frontend.kind = "composite";
        c.sweep = SweepSpec{"k", int_range(1, 10)};
        c.realizations = 1000;
    } else if (name == "fig7") {
        c.mode = "asymptotic-se";
        c.K = 1;
        c.sweep = SweepSpec{"m", {10, 16, 25, 40, 63, 100, 160, 250, 400, 630, 1000}};
        c.realizations = 1000;
        c.correlation_mode = "corr";
    } else if (name == "fig8") {
        c.mode = "se-cdf";
        c.M = 100;
        c.K = 5;
        c.frontend.kind = "composite";
        c.snr = SnrSpec{true, 0.0, -10.0, 10.0};
        c.channel_kinds = {"iid-rayleigh", "correlated-rayleigh", "free-space-ula"};
        c.realizations = 500;
    } else if (name == "fig9") {
        c.mode = "se";
        c.M = 100;
        c.K = 5;
        c.frontend.kind = "composite";
        c.sweep = SweepSpec{"b", int_range(1, 10)};
        c.realizations = 1000;
    } else if (name == "fig10") {
        c.mode = "averaged-sinr";
        c.M = 100;
        c.K = 5;
        c.frontend.kind = "composite";
        c.schemes = {"da-mr"};
        c.sweep = SweepSpec{"snr-db", {-10, -5, 0, 5, 10}};
        c.realizations = 1000;
    } else {
        throw ConfigError("unknown figure preset '" + name + "'");
    }
    c.validate();
    return c;
}

}  // namespace distmimo
