// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "distmimo/combining.hpp"

namespace distmimo {

/// Configuration problems carry the offending field name in the message.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// SNR specification: a fixed value in dB for every UE, or a [lo, hi] dB
/// interval from which each UE's SNR is drawn uniformly per realization.
struct SnrSpec {
    bool is_range = false;
    double value_db = 0.0;
    double lo_db = 0.0;
    double hi_db = 0.0;
};

struct SweepSpec {
    std::string variable;  // one of k, m, b, snr-db
    std::vector<double> values;
};

struct ScenarioConfig {
    // What the experiment measures.
    //   se                     ergodic SE per UE over channel realizations
    //   averaged-sinr          numerator/denominator averaged separately,
    //                          perfect and LS-estimated CSI
    //   distortion-terms       closed-form BS/UE distortion over noise
    //   signal-distortion-vs-m DA-MR vs DA-ZF signal and distortion powers
    //   eigenvalues            averaged ordered spectrum of C_etaeta
    //   se-cdf                 instantaneous SE samples over SNR/angle draws
    //   asymptotic-se          closed-form hardware cases over antenna counts
    std::string mode = "se";

    std::string channel_kind = "iid-rayleigh";
    int M = 100;
    int K = 5;
    double angular_std_deg = 10.0;
    double antenna_spacing = 0.5;
    std::vector<double> ue_angles_deg;  // empty: drawn per realization (ULA)
    SnrSpec snr;

    FrontEndSpec frontend;
    double kappa = 0.99;

    std::vector<std::string> schemes = {"da-mmse", "da-mr"};
    std::string correlation_mode = "both";  // corr | uncorr | both
    int realizations = 1000;
    std::int64_t mc_samples = 100000;
    std::uint64_t seed = 0;
    bool seed_set = false;

    std::optional<SweepSpec> sweep;

    // se-cdf only: channel models evaluated side by side.
    std::vector<std::string> channel_kinds;
    // asymptotic-se only: subset of {ideal, ue-only, bs-only, ue-bs}.
    std::vector<std::string> hardware_cases = {"ideal", "ue-only", "bs-only", "ue-bs"};

    void validate() const;
    bool wants_corr() const { return correlation_mode != "uncorr"; }
    bool wants_uncorr() const { return correlation_mode != "corr"; }

    static ScenarioConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Paper parameterizations for fig3..fig10; unspecified values are filled
/// with the documented defaults and flagged in the runner metadata.
ScenarioConfig figure_preset(const std::string& name);

}  // namespace distmimo
